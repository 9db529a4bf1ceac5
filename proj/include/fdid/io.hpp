#pragma once

// CSV and JSON serialization.
//
// Signal CSV:   "# T=<seconds>" then header t,ch0_re,ch0_im,...; N rows, plus
//               an optional row at t = T holding the end sample.
// Spectrum CSV: header f,ch0_re,ch0_im,...
// Numbers are written with 17 significant digits.

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fdid/error.hpp"
#include "fdid/identify.hpp"
#include "fdid/model.hpp"
#include "fdid/signal.hpp"
#include "fdid/simulate.hpp"
#include "fdid/window.hpp"

namespace fdid::io {

using nlohmann::json;

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

inline std::string channel_header(const std::string& first, std::size_t channels) {
  std::string h = first;
  for (std::size_t c = 0; c < channels; ++c) h += ",ch" + std::to_string(c) + "_re,ch" + std::to_string(c) + "_im";
  return h;
}

inline void write_signal_csv(const std::string& path, const Signal& s) {
  auto out = open_out(path);
  out << "# T=" << s.T << "\n" << channel_header("t", s.channels()) << "\n";
  auto row = [&](double t, const Eigen::VectorXcd& v) {
    out << t;
    for (Eigen::Index c = 0; c < v.size(); ++c) out << ',' << v(c).real() << ',' << v(c).imag();
    out << '\n';
  };
  for (std::size_t j = 0; j < s.N(); ++j) row(s.sample_time(j), s.values.col(static_cast<Eigen::Index>(j)));
  if (s.end) row(s.T, *s.end);
}

namespace detail {
inline std::vector<double> split_numbers(const std::string& line, const std::string& path, std::size_t lineno) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size() || cell.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
    v.push_back(x);
  }
  return v;
}
}  // namespace detail

// Without a "# T=" line, T = N dt from the first two time stamps and no end
// sample is assumed.
inline Signal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::optional<double> T;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (const auto pos = line.find("T="); pos != std::string::npos) T = std::stod(line.substr(pos + 2));
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      require(line.rfind("t,", 0) == 0, path + ": expected header starting with 't,'");
      continue;
    }
    rows.push_back(detail::split_numbers(line, path, lineno));
  }
  require(rows.size() >= 2, path + ": need at least two samples");
  const std::size_t width = rows[0].size();
  require(width >= 3 && width % 2 == 1, path + ": expected t followed by re,im pairs");
  for (const auto& r : rows) require(r.size() == width, path + ": ragged row");
  const std::size_t channels = (width - 1) / 2;
  std::size_t n = rows.size();
  bool has_end = false;
  if (T) {
    has_end = std::abs(rows.back()[0] - *T) <= 1e-9 * *T;
    if (has_end) --n;
  } else {
    T = static_cast<double>(n) * (rows[1][0] - rows[0][0]);
  }
  require(n >= 2, path + ": need at least two samples");
  Eigen::MatrixXcd values(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(n));
  auto unpack = [&](const std::vector<double>& r) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(channels));
    for (std::size_t c = 0; c < channels; ++c) v(static_cast<Eigen::Index>(c)) = {r[1 + 2 * c], r[2 + 2 * c]};
    return v;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const double expected = *T * static_cast<double>(j) / static_cast<double>(n);
    require(std::abs(rows[j][0] - expected) <= 1e-9 * *T, path + ": samples are not uniformly spaced on [0, T)");
    values.col(static_cast<Eigen::Index>(j)) = unpack(rows[j]);
  }
  std::optional<Eigen::VectorXcd> end;
  if (has_end) end = unpack(rows.back());
  return Signal(*T, std::move(values), std::move(end));
}

inline void write_spectrum_csv(const std::string& path, const Spectrum& s, bool with_norm = false) {
  auto out = open_out(path);
  out << channel_header("f", s.channels()) << (with_norm ? ",norm" : "") << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s.frequency(i);
    const auto col = s.coeffs.col(static_cast<Eigen::Index>(i));
    for (Eigen::Index c = 0; c < col.size(); ++c) out << ',' << col(c).real() << ',' << col(c).imag();
    if (with_norm) out << ',' << col.norm();
    out << '\n';
  }
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json j = matrix_to_json(Eigen::MatrixXd(m.real()));
  j["imag"] = matrix_to_json(Eigen::MatrixXd(m.imag()))["data"];
  return j;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  require(static_cast<Eigen::Index>(data.size()) == rows * cols, "matrix data has wrong length");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

inline Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  Eigen::MatrixXcd m = matrix_from_json(j).cast<std::complex<double>>();
  if (j.contains("imag")) {
    json im = j;
    im["data"] = j.at("imag");
    m.imag() = matrix_from_json(im);
  }
  return m;
}

inline json structure_to_json(const ModelStructure& s) {
  return {{"n_x", s.n_x}, {"n_u", s.n_u}, {"n_a", s.n_a}, {"n_b", s.n_b}};
}

inline ModelStructure structure_from_json(const json& j) {
  ModelStructure s{j.at("n_x").get<int>(), j.at("n_u").get<int>(), j.at("n_a").get<int>(), j.at("n_b").get<int>()};
  s.validate();
  return s;
}

inline json params_to_json(const ModelParams& p) {
  json A = json::array(), B = json::array();
  for (const auto& a : p.A) A.push_back(matrix_to_json(a));
  for (const auto& b : p.B) B.push_back(matrix_to_json(b));
  return {{"structure", structure_to_json(p.structure)}, {"A", A}, {"B", B}};
}

inline ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.structure = structure_from_json(j.at("structure"));
  for (const auto& a : j.at("A")) p.A.push_back(matrix_from_json(a));
  for (const auto& b : j.at("B")) p.B.push_back(matrix_from_json(b));
  p.validate();
  return p;
}

inline json forcing_to_json(const ForcingSpec& f) {
  return {{"frequencies", f.frequencies}, {"amplitudes", matrix_to_json(f.amplitudes)}, {"seed", f.seed}};
}

inline ForcingSpec forcing_from_json(const json& j) {
  ForcingSpec f;
  f.frequencies = j.at("frequencies").get<std::vector<double>>();
  f.amplitudes = complex_matrix_from_json(j.at("amplitudes"));
  f.seed = j.at("seed").get<std::uint64_t>();
  f.validate();
  return f;
}

inline json report_to_json(const EstimateReport& r) {
  json j;
  j["method"] = to_string(r.method);
  j["theta_hat"] = params_to_json(r.theta_hat);
  j["n_p"] = r.n_p;
  if (r.poly_coeffs.size() > 0) j["poly_coeffs"] = matrix_to_json(r.poly_coeffs);
  j["imag_norm"] = r.imag_norm;
  j["rank"] = r.rank;
  j["poly_rank"] = r.poly_rank;
  j["condition"] = r.condition;
  j["residual_L2"] = r.norms.l2;
  j["wall_time"] = r.wall_time;
  j["band"] = r.band;
  j["window"] = r.window ? json(r.window->name()) : json(nullptr);
  return j;
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace fdid::io
