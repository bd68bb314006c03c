#pragma once

// CodeDescriptor: the JSON description of a code that shards are bound to.
//
//   {"type": "array", "k": 4, "m": 2, "n": 5, "t": 3,
//    "cells": [[row, col, [member, ...] | null], ...],      // 1-based, column-major
//    "node_map": {"hub": 5, "fragment_nodes": [1, 2, 3, 4]}, // optional
//    "provenance": {"construction": "...", "parameters": {...}},
//    "certificate": {"t": 3, "patterns": 10} | null}
//
// Flat codes carry "type": "flat", "m": 1, "generator": ["1001", ...],
// "distance" and "decoder" ("bp" or "gauss") in place of "cells".

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpxor/arraycodes.hpp"
#include "bpxor/flat.hpp"
#include "bpxor/parallel.hpp"

namespace bpxor::storage {

enum class CodeType { Flat, Array };

struct Certificate {
  std::size_t t = 0;
  std::uint64_t patterns = 0;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct CodeDescriptor {
  CodeType type = CodeType::Array;
  // Shard layout. Flat codes use one row, cell j being generator column j.
  array::ArrayCode layout;
  std::optional<flat::FlatCode> flat;
  std::size_t t = 0;
  std::string construction;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<Certificate> certificate;

  std::size_t k() const noexcept { return layout.k(); }
  std::size_t m() const noexcept { return layout.m(); }
  std::size_t n() const noexcept { return layout.n(); }
  bool gauss_decoding() const noexcept { return flat && flat->decoder == flat::DecoderClass::Gauss; }
};

array::ArrayCode flat_layout(const flat::FlatCode& code);

CodeDescriptor describe(array::ArrayCode code, std::size_t t, std::string construction,
                        nlohmann::json parameters = nlohmann::json::object());
// t = claimed distance - 1.
CodeDescriptor describe(flat::FlatCode code, std::string construction,
                        nlohmann::json parameters = nlohmann::json::object());

// Checks every t-erasure pattern with the code's declared decoder and attaches
// a certificate. Returns the first failing pattern (0-based columns) instead
// when there is one; the descriptor is then left uncertified.
std::optional<std::vector<std::size_t>> certify(CodeDescriptor& descriptor, const EnumerationOptions& options = {});

nlohmann::json to_json(const CodeDescriptor& d);
CodeDescriptor descriptor_from_json(const nlohmann::json& j);

// Compact dump with sorted keys; the input to code_digest.
std::string canonical_json(const CodeDescriptor& d);

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
Digest code_digest(const CodeDescriptor& d);
std::string to_hex(const Digest& digest);

}  // namespace bpxor::storage
