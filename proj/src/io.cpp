#include "jsr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + e.what(),
                     line, column);
  } catch (const json::out_of_range& e) {
    throw ValueError(std::string("numeric value out of range: ") + e.what());
  }
}

double number_at(const json& node, const std::string& where) {
  if (!node.is_number()) throw SchemaError(where + ": expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ValueError(where + ": non-finite entry");
  return v;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

MatrixSet parse_matrix_set(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("matrix set: top level must be an object");
  if (!doc.contains("d") || !doc["d"].is_number_integer() || doc["d"].get<long long>() < 1) {
    throw SchemaError("matrix set: 'd' must be a positive integer");
  }
  const auto d = static_cast<Eigen::Index>(doc["d"].get<long long>());
  if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty()) {
    throw SchemaError("matrix set: 'matrices' must be a nonempty array");
  }

  std::vector<ComplexMatrix> matrices;
  std::vector<std::string> labels;
  std::size_t index = 0;
  for (const auto& entry : doc["matrices"]) {
    std::string label = "A" + std::to_string(index);
    if (entry.is_object() && entry.contains("label")) {
      if (!entry["label"].is_string()) throw SchemaError("matrix " + std::to_string(index) + ": label must be a string");
      label = entry["label"].get<std::string>();
    }
    const std::string where = "matrix '" + label + "'";
    if (!entry.is_object() || !entry.contains("rows") || !entry["rows"].is_array()) {
      throw SchemaError(where + ": expected an object with a 'rows' array");
    }
    const auto& rows = entry["rows"];
    if (static_cast<Eigen::Index>(rows.size()) != d) {
      throw SchemaError(where + ": has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(d));
    }
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
        throw SchemaError(where + ": row " + std::to_string(i) + " has " +
                          std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " + std::to_string(d));
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto& z = row[static_cast<std::size_t>(j)];
        const std::string at = where + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (!z.is_array() || z.size() != 2) throw SchemaError(at + ": expected [re, im]");
        m(i, j) = Complex(number_at(z[0], at), number_at(z[1], at));
      }
    }
    matrices.push_back(std::move(m));
    labels.push_back(std::move(label));
    ++index;
  }
  return MatrixSet(std::move(matrices), std::move(labels));
}

MatrixSet load_matrix_set(const std::string& path) { return parse_matrix_set(read_file(path)); }

std::string emit_matrix_set(const MatrixSet& set) {
  json doc;
  doc["d"] = set.dim();
  doc["matrices"] = json::array();
  for (std::size_t k = 0; k < set.size(); ++k) {
    json rows = json::array();
    const ComplexMatrix& m = set[k];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      rows.push_back(std::move(row));
    }
    doc["matrices"].push_back({{"label", set.labels()[k]}, {"rows", std::move(rows)}});
  }
  return doc.dump(2) + "\n";
}

OrbitClosure parse_orbit_closure(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw SchemaError("orbit closure: expected an object with a string 'kind'");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "sturmian") {
    if (!doc.contains("convergents") || !doc["convergents"].is_array()) {
      throw SchemaError("orbit closure: 'convergents' must be an array of \"p/q\" strings");
    }
    std::vector<Rational> convergents;
    for (const auto& c : doc["convergents"]) {
      if (!c.is_string()) throw SchemaError("orbit closure: convergent must be a \"p/q\" string");
      convergents.push_back(parse_rational(c.get<std::string>()));
    }
    return OrbitClosure::sturmian(std::move(convergents));
  }
  if (kind == "periodic") {
    if (!doc.contains("alphabet") || !doc["alphabet"].is_number_unsigned()) {
      throw SchemaError("orbit closure: 'alphabet' must be a positive integer");
    }
    if (!doc.contains("orbits") || !doc["orbits"].is_array()) throw SchemaError("orbit closure: 'orbits' must be an array");
    std::vector<PeriodicWord> orbits;
    for (const auto& o : doc["orbits"]) {
      if (!o.is_array() || o.empty()) throw SchemaError("orbit closure: each orbit must be a nonempty index array");
      Word cycle;
      for (const auto& s : o) {
        if (!s.is_number_unsigned()) throw SchemaError("orbit closure: symbols must be nonnegative integers");
        cycle.push_back(s.get<std::size_t>());
      }
      orbits.emplace_back(std::move(cycle));
    }
    return OrbitClosure::periodic(std::move(orbits), doc["alphabet"].get<std::size_t>());
  }
  throw SchemaError("orbit closure: unknown kind '" + kind + "'");
}

OrbitClosure load_orbit_closure(const std::string& path) { return parse_orbit_closure(read_file(path)); }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValueError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw ValueError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValueError("cannot move report into '" + path + "': " + ec.message());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string bounds_csv(const BoundsReport& report) {
  std::string out = kBoundsCsvHeader;
  out += '\n';
  for (const auto& row : report.rows) {
    out += std::to_string(row.n) + ',' + format_number(row.rho_plus) + ',' + format_number(row.rho_minus) + ',' +
           format_number(row.best_lower) + ',' + format_number(row.best_upper) + ',' + format_number(row.gap) + ',' +
           format_word(row.argmax_plus) + ',' + format_word(row.argmax_minus) + '\n';
  }
  return out;
}

std::string loglog_svg(const std::vector<std::pair<double, double>>& points, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points) {
    if (x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y)) logs.emplace_back(std::log10(x), std::log10(y));
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\" font-size=\"12\">log10 "
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kH / 2 << ")\">log10 " << y_label << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight << "\" height=\""
      << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!logs.empty()) {
    auto [xmin, xmax] = std::minmax_element(logs.begin(), logs.end(),
                                            [](const auto& a, const auto& b) { return a.first < b.first; });
    auto [ymin, ymax] = std::minmax_element(logs.begin(), logs.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
    const double x0 = xmin->first, x1 = std::max(xmax->first, x0 + 1e-9);
    const double y0 = ymin->second, y1 = std::max(ymax->second, y0 + 1e-9);
    auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * (kW - kLeft - kRight); };
    auto py = [&](double v) { return kH - kBottom - (v - y0) / (y1 - y0) * (kH - kTop - kBottom); };
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : logs) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : logs) svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\"/>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << kH - kBottom + 16 << "\" font-size=\"10\">" << x0 << "</text>\n"
        << "<text x=\"" << kW - kRight << "\" y=\"" << kH - kBottom + 16 << "\" font-size=\"10\" text-anchor=\"end\">"
        << x1 << "</text>\n"
        << "<text x=\"" << kLeft - 4 << "\" y=\"" << kH - kBottom << "\" font-size=\"10\" text-anchor=\"end\">" << y0
        << "</text>\n"
        << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + 10 << "\" font-size=\"10\" text-anchor=\"end\">" << y1
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace jsr
