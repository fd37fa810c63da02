#pragma once

// Labeling documents.
//
// JSON form (written by encode, fields in this order):
//   {
//     "n": 3,
//     "m": 3,
//     "horizontal": [[...m labels...], ...n rows...],
//     "vertical": [[...], ...],
//     "metadata": {"generator": ..., "plan": ..., "constant": ...}
//   }
// Row r, column c of "horizontal" is the label of H(r,c), the edge
// x_{r,c} -- x_{r,c+1}; "vertical" holds V(r,c), the edge x_{r,c} -- x_{r+1,c}.
// Indices are 1-based. "metadata" is optional.
//
// Edge-list form (input only), for hand-written files:
//   # comment
//   3 3          <- n m
//   H 1 1 1      <- orientation, row, column, label
//   V 3 1 16
// Edges without a line stay unlabeled; verify() reports them.

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "torusmagic/error.hpp"
#include "torusmagic/grid.hpp"
#include "torusmagic/labeling.hpp"

namespace torusmagic {

struct document_metadata {
  std::optional<std::string> generator;
  std::optional<std::string> plan;
  std::optional<std::int64_t> constant;

  bool empty() const noexcept { return !generator && !plan && !constant; }
  friend bool operator==(const document_metadata&, const document_metadata&) = default;
};

struct labeling_document {
  labeling lab;
  document_metadata metadata;
};

namespace detail {

inline void write_matrix(std::ostringstream& os, const labeling& lab, orientation o) {
  const auto& g = lab.dims();
  os << "[\n";
  for (int i = 1; i <= g.n; ++i) {
    os << "    [";
    for (int j = 1; j <= g.m; ++j) {
      if (j > 1) os << ", ";
      os << lab[edge_ref{o, i, j}];
    }
    os << (i < g.n ? "],\n" : "]\n");
  }
  os << "  ]";
}

}  // namespace detail

/// Serializes a labeling as a JSON matrix document. Output is byte-stable
/// and newline-terminated.
inline std::string encode(const labeling& lab, const document_metadata& meta = {}) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"n\": " << lab.dims().n << ",\n";
  os << "  \"m\": " << lab.dims().m << ",\n";
  os << "  \"horizontal\": ";
  detail::write_matrix(os, lab, orientation::horizontal);
  os << ",\n  \"vertical\": ";
  detail::write_matrix(os, lab, orientation::vertical);
  if (!meta.empty()) {
    os << ",\n  \"metadata\": {";
    const char* sep = "";
    if (meta.generator) {
      os << sep << "\"generator\": " << nlohmann::json(*meta.generator).dump();
      sep = ", ";
    }
    if (meta.plan) {
      os << sep << "\"plan\": " << nlohmann::json(*meta.plan).dump();
      sep = ", ";
    }
    if (meta.constant) os << sep << "\"constant\": " << *meta.constant;
    os << "}";
  }
  os << "\n}\n";
  return os.str();
}

namespace detail {

inline grid_dims document_dims(std::int64_t n, std::int64_t m) {
  if (n < 3 || m < 3 || n > 1'000'000 || m > 1'000'000) {
    throw shape_error("grid dimensions must be at least 3, got " + std::to_string(n) + " x " +
                      std::to_string(m));
  }
  return dims(static_cast<int>(n), static_cast<int>(m));
}

inline void read_matrix(const nlohmann::json& doc, const char* key, orientation o, labeling& lab) {
  const auto& g = lab.dims();
  if (!doc.contains(key)) throw parse_error(std::string("missing field \"") + key + "\"");
  const auto& rows = doc.at(key);
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(g.n)) {
    throw shape_error(std::string("\"") + key + "\" must have " + std::to_string(g.n) + " rows");
  }
  for (int i = 1; i <= g.n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i - 1)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(g.m)) {
      throw shape_error(std::string("\"") + key + "\" row " + std::to_string(i) + " must have " +
                        std::to_string(g.m) + " entries");
    }
    for (int j = 1; j <= g.m; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j - 1)];
      if (!cell.is_number_integer()) {
        throw parse_error(std::string("\"") + key + "\"[" + std::to_string(i) + "][" +
                          std::to_string(j) + "] is not an integer");
      }
      const auto x = cell.get<std::int64_t>();
      if (x <= 0) {
        throw value_error(std::string("\"") + key + "\"[" + std::to_string(i) + "][" +
                          std::to_string(j) + "] = " + std::to_string(x) + " is not positive");
      }
      lab[edge_ref{o, i, j}] = x;
    }
  }
}

inline labeling_document decode_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("document must be a JSON object");
  for (const char* key : {"n", "m"}) {
    if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
      throw parse_error(std::string("field \"") + key + "\" must be an integer");
    }
  }
  labeling_document out{labeling(document_dims(doc.at("n").get<std::int64_t>(),
                                               doc.at("m").get<std::int64_t>())),
                        {}};
  read_matrix(doc, "horizontal", orientation::horizontal, out.lab);
  read_matrix(doc, "vertical", orientation::vertical, out.lab);

  if (doc.contains("metadata")) {
    const auto& meta = doc.at("metadata");
    if (!meta.is_object()) throw parse_error("\"metadata\" must be an object");
    if (meta.contains("generator") && meta.at("generator").is_string()) {
      out.metadata.generator = meta.at("generator").get<std::string>();
    }
    if (meta.contains("plan") && meta.at("plan").is_string()) {
      out.metadata.plan = meta.at("plan").get<std::string>();
    }
    if (meta.contains("constant") && meta.at("constant").is_number_integer()) {
      out.metadata.constant = meta.at("constant").get<std::int64_t>();
    }
  }
  return out;
}

inline labeling_document decode_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::optional<labeling> lab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";

    if (!lab) {
      std::int64_t n = 0, m = 0;
      std::istringstream dims_line(line);
      std::string extra;
      if (!(dims_line >> n >> m) || (dims_line >> extra)) {
        throw parse_error(where + "expected \"n m\" header");
      }
      lab.emplace(document_dims(n, m));
      continue;
    }
    if (head != "H" && head != "V" && head != "h" && head != "v") {
      throw parse_error(where + "expected H or V, got \"" + head + "\"");
    }
    std::int64_t i = 0, j = 0, x = 0;
    std::string extra;
    if (!(fields >> i >> j >> x) || (fields >> extra)) {
      throw parse_error(where + "expected \"H|V row column label\"");
    }
    const auto& g = lab->dims();
    if (i < 1 || i > g.n || j < 1 || j > g.m) {
      throw shape_error(where + "edge (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is outside the " + std::to_string(g.n) + " x " + std::to_string(g.m) +
                        " grid");
    }
    if (x <= 0) throw value_error(where + "label " + std::to_string(x) + " is not positive");
    const edge_ref e{std::toupper(static_cast<unsigned char>(head[0])) == 'H' ? orientation::horizontal
                                                                             : orientation::vertical,
                     static_cast<int>(i), static_cast<int>(j)};
    auto& slot = (*lab)[e];
    if (slot != 0) throw parse_error(where + to_string(e) + " is labeled twice");
    slot = x;
  }
  if (!lab) throw parse_error("empty edge list");
  return {std::move(*lab), {}};
}

}  // namespace detail

/// Parses a JSON document or, if the text does not start with '{', an edge
/// list. Values are not checked for the supermagic property.
inline labeling_document decode_document(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw parse_error("empty document");
  if (text[first] == '{') return detail::decode_json(text);
  return detail::decode_edge_list(text);
}

inline labeling decode(const std::string& text) { return decode_document(text).lab; }

}  // namespace torusmagic
