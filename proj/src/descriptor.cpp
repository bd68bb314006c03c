#include "bpxor/descriptor.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

#include "bpxor/errors.hpp"

namespace bpxor::storage {

array::ArrayCode flat_layout(const flat::FlatCode& code) {
  std::vector<array::Cell> cells;
  for (auto& c : code.columns()) cells.emplace_back(std::move(c));
  return array::ArrayCode(1, code.n(), code.k(), std::move(cells));
}

CodeDescriptor describe(array::ArrayCode code, std::size_t t, std::string construction, nlohmann::json parameters) {
  if (t > code.n()) throw std::invalid_argument("tolerance exceeds column count");
  CodeDescriptor d;
  d.type = CodeType::Array;
  d.layout = std::move(code);
  d.t = t;
  d.construction = std::move(construction);
  d.parameters = std::move(parameters);
  return d;
}

CodeDescriptor describe(flat::FlatCode code, std::string construction, nlohmann::json parameters) {
  CodeDescriptor d;
  d.type = CodeType::Flat;
  d.layout = flat_layout(code);
  d.t = code.claimed_distance == 0 ? 0 : code.claimed_distance - 1;
  d.flat = std::move(code);
  d.construction = std::move(construction);
  d.parameters = std::move(parameters);
  return d;
}

std::optional<std::vector<std::size_t>> certify(CodeDescriptor& d, const EnumerationOptions& options) {
  d.certificate.reset();
  std::optional<std::vector<std::size_t>> failure;
  if (d.flat) {
    failure = d.flat->decoder == flat::DecoderClass::BP ? flat::verify_bp(*d.flat, d.t, options)
                                                        : flat::verify_gauss(*d.flat, d.t, options);
  } else {
    auto result = array::verify_tolerance(d.layout, d.t, options);
    if (!result.certified()) failure = result.counterexample;
  }
  if (!failure) d.certificate = Certificate{d.t, binomial(d.n(), d.t)};
  return failure;
}

nlohmann::json to_json(const CodeDescriptor& d) {
  using nlohmann::json;
  json j;
  j["type"] = d.type == CodeType::Flat ? "flat" : "array";
  j["k"] = d.k();
  j["m"] = d.m();
  j["n"] = d.n();
  j["t"] = d.t;
  if (d.flat) {
    json rows = json::array();
    for (const auto& r : d.flat->generator.row_vectors()) rows.push_back(r.to_string());
    j["generator"] = rows;
    j["distance"] = d.flat->claimed_distance;
    j["decoder"] = flat::to_string(d.flat->decoder);
  } else {
    json cells = json::array();
    for (std::size_t col = 0; col < d.n(); ++col) {
      for (std::size_t row = 0; row < d.m(); ++row) {
        const auto& c = d.layout.cell(row, col);
        json members = nullptr;
        if (c) {
          members = json::array();
          for (std::size_t f : c->indices()) members.push_back(f + 1);
        }
        cells.push_back({row + 1, col + 1, members});
      }
    }
    j["cells"] = cells;
    if (const auto& map = d.layout.node_map()) {
      json nodes = json::array();
      for (std::size_t v : map->fragment_nodes) nodes.push_back(v + 1);
      j["node_map"] = {{"hub", map->hub + 1}, {"fragment_nodes", nodes}};
    }
  }
  j["provenance"] = {{"construction", d.construction}, {"parameters", d.parameters}};
  if (d.certificate) {
    j["certificate"] = {{"t", d.certificate->t}, {"patterns", d.certificate->patterns}};
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

CodeDescriptor descriptor_from_json(const nlohmann::json& j) {
  try {
    CodeDescriptor d;
    const auto type = j.at("type").get<std::string>();
    const auto k = j.at("k").get<std::size_t>();
    const auto m = j.at("m").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    d.t = j.at("t").get<std::size_t>();
    if (type == "flat") {
      std::vector<BitVector> rows;
      for (const auto& r : j.at("generator")) rows.push_back(BitVector::from_string(r.get<std::string>()));
      auto code = flat::make_flat_code(BitMatrix(std::move(rows)), j.at("distance").get<std::size_t>(),
                                       flat::decoder_class_from_string(j.at("decoder").get<std::string>()));
      if (code.k() != k || code.n() != n || m != 1) throw FormatError("flat descriptor dimensions disagree");
      d.type = CodeType::Flat;
      d.layout = flat_layout(code);
      d.flat = std::move(code);
    } else if (type == "array") {
      std::vector<array::Cell> cells(m * n);
      std::vector<bool> filled(m * n, false);
      for (const auto& c : j.at("cells")) {
        const auto row = c.at(0).get<std::size_t>();
        const auto col = c.at(1).get<std::size_t>();
        if (row < 1 || row > m || col < 1 || col > n) throw FormatError("cell position out of range");
        const std::size_t idx = (row - 1) * n + (col - 1);
        if (filled[idx]) throw FormatError("cell listed twice");
        filled[idx] = true;
        if (c.at(2).is_null()) continue;
        SymbolComposition comp(k);
        for (const auto& f : c.at(2)) {
          const auto v = f.get<std::size_t>();
          if (v < 1 || v > k) throw FormatError("cell member out of range");
          comp.set(v - 1);
        }
        cells[idx] = std::move(comp);
      }
      if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
        throw FormatError("every cell must be listed, empty cells as null");
      }
      d.type = CodeType::Array;
      d.layout = array::ArrayCode(m, n, k, std::move(cells));
      if (j.contains("node_map")) {
        array::NodeMap map;
        map.hub = j.at("node_map").at("hub").get<std::size_t>() - 1;
        for (const auto& v : j.at("node_map").at("fragment_nodes")) map.fragment_nodes.push_back(v.get<std::size_t>() - 1);
        d.layout.set_node_map(std::move(map));
      }
    } else {
      throw FormatError("unknown code type '" + type + "'");
    }
    if (d.t > n) throw FormatError("tolerance exceeds column count");
    if (j.contains("provenance")) {
      d.construction = j.at("provenance").value("construction", "");
      d.parameters = j.at("provenance").value("parameters", nlohmann::json::object());
    }
    if (j.contains("certificate") && !j.at("certificate").is_null()) {
      d.certificate = Certificate{j.at("certificate").at("t").get<std::size_t>(),
                                  j.at("certificate").at("patterns").get<std::uint64_t>()};
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed code descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid code descriptor: ") + e.what());
  }
}

std::string canonical_json(const CodeDescriptor& d) { return to_json(d).dump(); }

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
    throw Error("SHA-256 computation failed");
  }
  return out;
}

Digest code_digest(const CodeDescriptor& d) {
  const auto text = canonical_json(d);
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string to_hex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : digest) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xF]);
  }
  return s;
}

}  // namespace bpxor::storage
