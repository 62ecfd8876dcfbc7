#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tsylv/error.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/transforms.hpp"

namespace tsylv {

// Matrix text format:
//
//   # comment
//   matrix A 2 1
//   1
//   -0.5
//
// A header "matrix <name> <rows> <cols>" is followed by exactly <rows> lines
// of <cols> whitespace-separated decimals. Values are written in the shortest
// form that parses back to the same double.

/// Shortest decimal that round-trips to exactly x.
inline std::string format_exact(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline void write_matrix(std::ostream& os, std::string_view name, const DenseMatrix& m) {
  os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_exact(m(i, j));
    }
    os << '\n';
  }
}

inline void write_instance(std::ostream& os, const ProblemInstance& inst) {
  write_matrix(os, "A", inst.a());
  write_matrix(os, "B", inst.b());
  write_matrix(os, "C", inst.c());
}

struct NamedMatrix {
  std::string name;
  DenseMatrix value;
};

namespace detail {

/// Whitespace-separated tokens up to an optional trailing '#' comment.
inline std::vector<std::string_view> split_ws(std::string_view line) {
  line = line.substr(0, line.find('#'));
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool is_blank_or_comment(std::string_view line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (ch != ' ' && ch != '\t' && ch != '\r') return false;
  }
  return true;
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line_no) {
  T value{};
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "bad number '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace detail

inline std::vector<NamedMatrix> read_matrices(std::istream& is) {
  std::vector<NamedMatrix> out;
  std::string line;
  std::size_t line_no = 0;
  auto next_content_line = [&](std::string& dst) {
    while (std::getline(is, dst)) {
      ++line_no;
      if (!detail::is_blank_or_comment(dst)) return true;
    }
    return false;
  };

  while (next_content_line(line)) {
    const auto head = detail::split_ws(line);
    if (head.size() != 4 || head[0] != "matrix") {
      detail::parse_fail(line_no, "expected 'matrix <name> <rows> <cols>'");
    }
    // head views into `line`, which the row reads below overwrite.
    const std::string name(head[1]);
    const auto rows = detail::parse_number<std::size_t>(head[2], line_no);
    const auto cols = detail::parse_number<std::size_t>(head[3], line_no);
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!next_content_line(line)) {
        detail::parse_fail(line_no, "matrix " + name + " declares " +
                                        std::to_string(rows) + " rows, file ended early");
      }
      const auto toks = detail::split_ws(line);
      if (toks.size() != cols) {
        detail::parse_fail(line_no, "expected " + std::to_string(cols) + " values, found " +
                                        std::to_string(toks.size()));
      }
      for (auto tok : toks) values.push_back(detail::parse_number<double>(tok, line_no));
    }
    try {
      out.push_back({name, DenseMatrix(rows, cols, std::move(values))});
    } catch (const Error& e) {
      detail::parse_fail(line_no, e.what());
    }
  }
  return out;
}

/// Reads the matrices named A, B and C; other matrices are ignored.
inline ProblemInstance read_instance(std::istream& is) {
  std::map<std::string, DenseMatrix> by_name;
  for (auto& nm : read_matrices(is)) {
    if (!by_name.emplace(nm.name, std::move(nm.value)).second) {
      throw Error(ErrorKind::ParseError, "matrix " + nm.name + " given twice");
    }
  }
  for (const char* required : {"A", "B", "C"}) {
    if (!by_name.count(required)) {
      throw Error(ErrorKind::ParseError, std::string("missing matrix ") + required);
    }
  }
  try {
    return ProblemInstance(by_name.at("A"), by_name.at("B"), by_name.at("C"));
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace tsylv
