#pragma once

// Run configuration (plain `key = value` text, expressions quoted) and
// the sweep-record CSV schema with paired decimal/hex-float columns.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gskdet/problem.hpp"

namespace gskdet {

class config_error : public std::runtime_error {
 public:
  config_error(const std::string& msg, int line)
      : std::runtime_error("config:" + std::to_string(line) + ": " + msg) {}
};

struct RunConfig {
  std::string nu_str = "0";
  std::string u_str;
  std::string g_str = "0";
  double q = 1.0;
  std::vector<double> xs;
  int n_nodes = 160;
  std::optional<double> ce_width;
  double ce_height = 0.25;
  std::optional<double> delta;
  int n_circle = 128;
  int n_quad = 128;
  double saddle_guess = 0.0;
  std::string out_path;

  static RunConfig parse(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    bool have_u = false, have_x = false;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        std::size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
      };
      std::string t = trim(line);
      if (t.empty()) continue;
      std::size_t eq = t.find('=');
      if (eq == std::string::npos) throw config_error("expected `key = value`", lineno);
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      if (val.empty()) throw config_error("empty value for key '" + key + "'", lineno);

      auto unquote = [&](const std::string& s) {
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
          return s.substr(1, s.size() - 2);
        throw config_error("expression value for '" + key + "' must be quoted", lineno);
      };
      auto as_double = [&](const std::string& s) {
        try {
          std::size_t used = 0;
          double v = std::stod(s, &used);
          if (used != s.size()) throw std::invalid_argument("");
          return v;
        } catch (const std::exception&) {
          throw config_error("malformed number '" + s + "' for key '" + key + "'", lineno);
        }
      };
      auto as_int = [&](const std::string& s) {
        double v = as_double(s);
        if (v != std::floor(v)) throw config_error("expected integer for key '" + key + "'", lineno);
        return int(v);
      };

      if (key == "nu") cfg.nu_str = unquote(val);
      else if (key == "u") { cfg.u_str = unquote(val); have_u = true; }
      else if (key == "g") cfg.g_str = unquote(val);
      else if (key == "q") cfg.q = as_double(val);
      else if (key == "x") { cfg.xs = {as_double(val)}; have_x = true; }
      else if (key == "xs") {
        cfg.xs.clear();
        std::stringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ',')) {
          std::size_t b = item.find_first_not_of(" \t");
          std::size_t e = item.find_last_not_of(" \t");
          if (b == std::string::npos) throw config_error("empty xs entry", lineno);
          cfg.xs.push_back(as_double(item.substr(b, e - b + 1)));
        }
        have_x = !cfg.xs.empty();
      }
      else if (key == "n_nodes") cfg.n_nodes = as_int(val);
      else if (key == "ce_width") cfg.ce_width = as_double(val);
      else if (key == "ce_height") cfg.ce_height = as_double(val);
      else if (key == "delta") cfg.delta = as_double(val);
      else if (key == "n_circle") cfg.n_circle = as_int(val);
      else if (key == "n_quad") cfg.n_quad = as_int(val);
      else if (key == "saddle_guess") cfg.saddle_guess = as_double(val);
      else if (key == "out") cfg.out_path = val;
      else throw config_error("unknown key '" + key + "'", lineno);
    }
    if (!have_u) throw config_error("missing key 'u'", 0);
    if (!have_x) throw config_error("missing key 'x' (or 'xs')", 0);
    return cfg;
  }

  static RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse(in);
  }

  /// Builds a validated ProblemSpec at the given x.
  ProblemSpec to_spec(double x) const {
    AnalyticExpr nu = AnalyticExpr::parse(nu_str);
    AnalyticExpr u = AnalyticExpr::parse(u_str);
    AnalyticExpr g = AnalyticExpr::parse(g_str);
    ProblemSpec s = ProblemSpec::make(nu, u, g, q, x, saddle_guess);
    s.n_nodes = n_nodes;
    s.n_quad = n_quad;
    s.n_circle = n_circle;
    s.ce_height = ce_height;
    if (ce_width) s.ce_width = *ce_width;
    if (delta) s.delta = *delta;
    s.validate();
    return s;
  }
};

/// One row of a validation sweep.
struct SweepRecord {
  double x = 0.0;
  cplx det_num;
  cplx det_asym;
  double abs_Bx = 0.0;
  double abs_b1_x32 = 0.0;   // |b_1| x^{-3/2}
  double abs_osc_plus = 0.0;
  double abs_osc_minus = 0.0;
  double rel_err = 0.0;
  cplx dlogdet_fd;
  cplx dlogdet_formula;
  double runtime_ms = 0.0;

  std::vector<double> fields() const {
    return {x,
            det_num.real(), det_num.imag(),
            det_asym.real(), det_asym.imag(),
            abs_Bx, abs_b1_x32, abs_osc_plus, abs_osc_minus,
            rel_err,
            dlogdet_fd.real(), dlogdet_fd.imag(),
            dlogdet_formula.real(), dlogdet_formula.imag(),
            runtime_ms};
  }

  static SweepRecord from_fields(const std::vector<double>& f) {
    if (f.size() != 15) throw std::runtime_error("SweepRecord: wrong field count");
    SweepRecord r;
    r.x = f[0];
    r.det_num = {f[1], f[2]};
    r.det_asym = {f[3], f[4]};
    r.abs_Bx = f[5];
    r.abs_b1_x32 = f[6];
    r.abs_osc_plus = f[7];
    r.abs_osc_minus = f[8];
    r.rel_err = f[9];
    r.dlogdet_fd = {f[10], f[11]};
    r.dlogdet_formula = {f[12], f[13]};
    r.runtime_ms = f[14];
    return r;
  }

  static const char* column_names() {
    return "x,det_num_re,det_num_im,det_asym_re,det_asym_im,abs_Bx,abs_b1_x32,"
           "abs_osc_plus,abs_osc_minus,rel_err,dlogdet_fd_re,dlogdet_fd_im,"
           "dlogdet_formula_re,dlogdet_formula_im,runtime_ms";
  }
};

inline constexpr const char* kCsvVersionLine = "# gskdet-csv v1";

/// Each field is written twice: %.17g decimal and %a hex-float; the hex
/// column is the bit-exact regression baseline.
inline std::string csv_header() {
  std::string names(SweepRecord::column_names());
  std::string out = kCsvVersionLine;
  out += "\n";
  std::stringstream ss(names);
  std::string col;
  bool first = true;
  while (std::getline(ss, col, ',')) {
    if (!first) out += ",";
    out += col + "," + col + "_hex";
    first = false;
  }
  out += "\n";
  return out;
}

inline std::string csv_row(const SweepRecord& r) {
  std::string out;
  char buf[80];
  bool first = true;
  for (double v : r.fields()) {
    if (!first) out += ",";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    std::snprintf(buf, sizeof buf, "%a", v);
    out += ",";
    out += buf;
    first = false;
  }
  out += "\n";
  return out;
}

/// Loads a sweep CSV, reading the hex columns; rejects unknown schema
/// versions.
inline std::vector<SweepRecord> load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvVersionLine)
    throw std::runtime_error("load_csv: unknown or missing schema version line");
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: missing column header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("aborted") != std::string::npos)
        throw std::runtime_error("load_csv: file flagged as partial: " + line);
      continue;
    }
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    int idx = 0;
    while (std::getline(ss, cell, ',')) {
      if (idx % 2 == 1) fields.push_back(std::strtod(cell.c_str(), nullptr));
      ++idx;
    }
    out.push_back(SweepRecord::from_fields(fields));
  }
  return out;
}

/// Single-buffer append so concurrent writers cannot interleave a row.
inline void append_csv_atomic(const std::string& path, const std::string& payload,
                              bool write_header_if_new) {
  bool exists = false;
  {
    std::ifstream probe(path);
    exists = probe.good();
  }
  std::string data = (!exists && write_header_if_new) ? csv_header() + payload : payload;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(data.data(), std::streamsize(data.size()));
  out.flush();
}

}  // namespace gskdet
