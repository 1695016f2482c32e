// Copyright 2026 The skewlda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skewlda/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "skewlda/asymptotics.hpp"
#include "skewlda/error.hpp"
#include "skewlda/estimators.hpp"

namespace skewlda::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw Error(ErrorKind::kParse, os.str());
}

}  // namespace

model::DataSet read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line, ',');
      break;
    }
  }
  if (header.empty()) parse_error(line_no == 0 ? 1 : line_no, "missing header row");
  int label_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    header[j] = trim(header[j]);
    if (header[j] == "label") {
      if (label_col >= 0) parse_error(line_no, "duplicate label column");
      label_col = static_cast<int>(j);
    }
  }
  const std::size_t width = header.size();
  const std::size_t p = width - (label_col >= 0 ? 1 : 0);
  if (p == 0) parse_error(line_no, "no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != width) {
      std::ostringstream os;
      os << "expected " << width << " fields, found " << fields.size();
      parse_error(line_no, os.str());
    }
    for (std::size_t j = 0; j < width; ++j) {
      const auto v = to_double(fields[j]);
      if (!v) parse_error(line_no, "non-numeric value '" + trim(fields[j]) + "'");
      if (static_cast<int>(j) == label_col) {
        if (*v != -1.0 && *v != 1.0) parse_error(line_no, "label must be -1 or 1");
        labels.push_back(static_cast<int>(*v));
      } else {
        values.push_back(*v);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(values.size() / p);
  model::DataSet data;
  data.observations.resize(n, static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j)
      data.observations(i, j) = values[static_cast<std::size_t>(i) * p + j];
  if (label_col >= 0) {
    data.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), n);
  }
  return data;
}

model::DataSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open input file '" + path + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const model::DataSet& data) {
  for (Eigen::Index j = 0; j < data.p(); ++j) out << (j ? "," : "") << 'x' << j + 1;
  if (data.labels) out << ",label";
  out << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.observations(i, j));
      out << (j ? "," : "") << buf;
    }
    if (data.labels) out << ',' << (*data.labels)(i);
    out << '\n';
  }
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::kConfig, "config field '" + field + "': " + why);
}

template <class T>
T get_field(const json& j, const std::string& field) {
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    field_error(field, std::string("invalid value (") + e.what() + ")");
  }
}

}  // namespace

montecarlo::ExperimentConfig config_from_json(const json& j,
                                              montecarlo::SigmaMode default_sigma) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  static const std::set<std::string> known = {
      "p",       "alpha_grid", "tau_grid", "n_grid",   "reps",         "master_seed",
      "methods", "sigma_mode", "threads",  "tol",      "max_iter",     "max_restarts"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) field_error(key, "unknown field");
  }
  static const std::vector<std::string> required = {"p",      "alpha_grid", "tau_grid",
                                                    "n_grid", "reps",       "master_seed",
                                                    "methods"};
  for (const auto& f : required) {
    if (!j.contains(f)) field_error(f, "missing");
  }
  montecarlo::ExperimentConfig c;
  c.p = get_field<Eigen::Index>(j, "p");
  c.alpha_grid = get_field<std::vector<double>>(j, "alpha_grid");
  c.tau_grid = get_field<std::vector<double>>(j, "tau_grid");
  c.n_grid = get_field<std::vector<Eigen::Index>>(j, "n_grid");
  c.reps = get_field<int>(j, "reps");
  c.master_seed = get_field<std::uint64_t>(j, "master_seed");
  for (const auto& name : get_field<std::vector<std::string>>(j, "methods")) {
    try {
      c.methods.push_back(estimators::parse_method(name));
    } catch (const Error&) {
      field_error("methods", "unknown method '" + name + "'");
    }
  }
  c.sigma_mode = default_sigma;
  if (j.contains("sigma_mode")) {
    const auto mode = get_field<std::string>(j, "sigma_mode");
    if (mode == "identity") {
      c.sigma_mode = montecarlo::SigmaMode::kIdentity;
    } else if (mode == "random-AAt") {
      c.sigma_mode = montecarlo::SigmaMode::kRandomAAt;
    } else {
      field_error("sigma_mode", "expected \"identity\" or \"random-AAt\"");
    }
  }
  if (j.contains("threads")) c.threads = get_field<int>(j, "threads");
  if (j.contains("tol")) c.iteration.tol = get_field<double>(j, "tol");
  if (j.contains("max_iter")) c.iteration.max_iter = get_field<int>(j, "max_iter");
  if (j.contains("max_restarts")) c.iteration.max_restarts = get_field<int>(j, "max_restarts");
  montecarlo::validate(c);
  return c;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
    case ErrorKind::kParse:
    case ErrorKind::kSupervisionRequired:
    case ErrorKind::kInvalidWeight:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

namespace {

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector parse_vector(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto d = to_double(parts[i]);
    if (!d) throw Error(ErrorKind::kUsage, flag + ": cannot parse '" + text + "'");
    v(static_cast<Eigen::Index>(i)) = *d;
  }
  return v;
}

// Rows separated by ';', entries by ','.
Matrix parse_matrix(const std::string& text, const std::string& flag) {
  const auto rows = split(text, ';');
  std::vector<Vector> parsed;
  for (const auto& r : rows) parsed.push_back(parse_vector(r, flag));
  const auto p = static_cast<Eigen::Index>(parsed.size());
  Matrix m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (parsed[i].size() != p) throw Error(ErrorKind::kUsage, flag + ": matrix must be square");
    m.row(i) = parsed[i].transpose();
  }
  return m;
}

void require_output_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorKind::kUsage, "output directory '" + parent.string() + "' does not exist");
  }
}

void require_input(const std::string& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorKind::kUsage, "input file '" + path + "' does not exist");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%14.6g", m(i, j));
      out << buf;
    }
    out << '\n';
  }
}

struct EstimateArgs {
  std::string input;
  std::string method;
  std::optional<double> alpha1;
  double tol = 1e-12;
  int max_iter = 200;
  std::uint64_t seed = 0;
  std::string output;
  std::string sign_reference;
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto method = estimators::parse_method(a.method);
  if (method == estimators::Method::kMom && !a.alpha1) {
    throw Error(ErrorKind::kUsage, "method mom requires --alpha1");
  }
  require_input(a.input);
  if (!a.output.empty()) require_output_dir(a.output);
  const auto data = read_csv_file(a.input);
  if (method == estimators::Method::kLda && !data.labels) {
    throw Error(ErrorKind::kSupervisionRequired,
                "method lda requires a 'label' column in the input");
  }
  estimators::IterationOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  RandomStream rng(a.seed);
  auto est = estimators::estimate(method, data, a.alpha1, opts, rng);
  if (!a.sign_reference.empty()) {
    const Vector ref = parse_vector(a.sign_reference, "--sign-reference");
    if (ref.size() != data.p()) {
      throw Error(ErrorKind::kUsage, "--sign-reference has the wrong dimension");
    }
    est = estimators::align_sign(std::move(est), ref);
  }
  const Vector mean = data.observations.colwise().mean().transpose();
  const Vector scores = (data.observations.rowwise() - mean.transpose()) * est.unit;
  json report = {
      {"method", estimators::method_name(method)},
      {"n", data.n()},
      {"p", data.p()},
      {"unit", to_std(est.unit)},
      {"raw", to_std(est.raw)},
      {"raw_norm", est.raw.norm()},
      {"converged", est.converged},
      {"iterations", est.iterations},
      {"restarts", est.restarts},
      {"ambiguous_leading_eigenvalue", est.ambiguous_leading_eigenvalue},
      {"objective_monotone", est.objective_monotone},
      {"sign_reference_applied", est.sign_reference_applied},
      {"scores", to_std(scores)},
  };
  if (a.output.empty()) {
    out << report.dump(2) << '\n';
  } else {
    std::ofstream f(a.output);
    if (!f) throw Error(ErrorKind::kUsage, "cannot write '" + a.output + "'");
    f << report.dump(2) << '\n';
  }
  return est.converged ? kExitOk : kExitRuntime;
}

struct ConstantsArgs {
  std::optional<double> alpha1;
  std::optional<double> tau;
  std::optional<Eigen::Index> p;
  std::string sigma;
  std::string h;
};

int run_constants(const ConstantsArgs& a, std::ostream& out) {
  if (!a.alpha1) throw Error(ErrorKind::kUsage, "--alpha1 is required");
  const double alpha1 = *a.alpha1;
  if (!(alpha1 > 0.5 && alpha1 < 1.0)) {
    throw Error(ErrorKind::kUsage,
                "--alpha1 must lie in (0.5, 1); alpha1 = alpha2 = 0.5 is the excluded "
                "symmetric case with zero skewness");
  }
  if (a.sigma.empty() != a.h.empty()) {
    throw Error(ErrorKind::kUsage, "--sigma and --h must be given together");
  }
  std::optional<model::MixtureParams> params;
  double tau = 0.0;
  Eigen::Index p = 0;
  if (!a.sigma.empty()) {
    const Matrix sigma = parse_matrix(a.sigma, "--sigma");
    const Vector h = parse_vector(a.h, "--h");
    if (h.size() != sigma.rows()) {
      throw Error(ErrorKind::kUsage, "--h and --sigma have different dimensions");
    }
    try {
      params.emplace(model::MixtureParams::centered(alpha1, h, linalg::SpdMatrix(sigma)));
    } catch (const Error& e) {
      throw Error(ErrorKind::kUsage, std::string("invalid --sigma/--h: ") + e.what());
    }
    tau = model::derive(*params).tau;
    p = h.size();
    if (a.tau && std::abs(*a.tau - tau) > 1e-9 * std::max(1.0, tau)) {
      throw Error(ErrorKind::kUsage, "--tau disagrees with h' sigma^{-1} h = " + fmt(tau));
    }
    if (a.p && *a.p != p) throw Error(ErrorKind::kUsage, "--p disagrees with --h");
  } else {
    if (!a.tau || !a.p) {
      throw Error(ErrorKind::kUsage, "--tau and --p are required without --sigma/--h");
    }
    tau = *a.tau;
    p = *a.p;
  }
  if (!(tau > 0.0)) throw Error(ErrorKind::kUsage, "--tau must be positive");
  if (p < 2) throw Error(ErrorKind::kUsage, "--p must be at least 2");

  const double c_lda = asymptotics::c_lda(alpha1, tau);
  const double c0 = asymptotics::c0_constant(alpha1, tau);
  const double c_r = asymptotics::c_skewvec(alpha1, tau, p);
  out << "alpha1 " << fmt(alpha1) << "\ntau " << fmt(tau) << "\np " << p << '\n';
  out << "C_LDA " << fmt(c_lda) << '\n';
  out << "C0 " << fmt(c0) << "  (tobi, jade3, pp)\n";
  out << "C_R " << fmt(c_r) << "  (skewvec)\n";
  if (params) {
    out << "\navar lda (C_LDA):\n";
    print_matrix(out, asymptotics::avar_ae(c_lda, *params).covariance);
    out << "avar tobi/jade3/pp (C0):\n";
    print_matrix(out, asymptotics::avar_ae(c0, *params).covariance);
    out << "avar skewvec (C_R):\n";
    print_matrix(out, asymptotics::avar_ae(c_r, *params).covariance);
    const auto omegas = asymptotics::mom_omegas(*params);
    out << "avar mom (omega1 " << fmt(omegas.omega1) << ", omega2 " << fmt(omegas.omega2)
        << "):\n";
    print_matrix(out, asymptotics::avar_mom(*params).covariance);
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::string output;
  int threads = 0;
};

int run_simulation(const SimulateArgs& a, bool chat, std::ostream& err) {
  require_input(a.config);
  require_output_dir(a.output);
  json j;
  {
    std::ifstream in(a.config);
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kConfig, std::string("config is not valid JSON: ") + e.what());
    }
  }
  auto config = config_from_json(j, chat ? montecarlo::SigmaMode::kIdentity
                                         : montecarlo::SigmaMode::kRandomAAt);
  if (a.threads > 0) config.threads = a.threads;
  std::ostringstream csv;
  if (chat) {
    if (config.sigma_mode != montecarlo::SigmaMode::kIdentity) {
      throw Error(ErrorKind::kConfig, "config field 'sigma_mode': chat runs use identity");
    }
    const auto rows = montecarlo::chat_experiment(config);
    for (const auto& r : rows) {
      if (r.low_precision) {
        err << "warning: " << estimators::method_name(r.method) << " alpha1=" << fmt(r.alpha1)
            << " tau=" << fmt(r.tau) << " n=" << r.n << ": only " << r.reps_used
            << " usable replicates, c_hat is low precision\n";
      }
    }
    montecarlo::write_chat_csv(csv, rows);
  } else {
    montecarlo::write_msi_csv(csv, montecarlo::msi_experiment(config));
  }
  std::ofstream f(a.output, std::ios::binary);
  if (!f) throw Error(ErrorKind::kUsage, "cannot write '" + a.output + "'");
  f << csv.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised linear discriminant directions from skewness", "skewlda"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a discriminant direction from CSV");
  estimate->add_option("-i,--input", est.input, "Input CSV")->required();
  estimate->add_option("-m,--method", est.method, "mom|skewvec|tobi|jade3|lda|pp")->required();
  estimate->add_option("--alpha1", est.alpha1, "Mixture weight, required for mom");
  estimate->add_option("--tol", est.tol, "Convergence tolerance for jade3/pp");
  estimate->add_option("--max-iter", est.max_iter, "Iteration cap for jade3/pp");
  estimate->add_option("--seed", est.seed, "Seed for random restarts");
  estimate->add_option("-o,--output", est.output, "Report path (default stdout)");
  estimate->add_option("--sign-reference", est.sign_reference,
                       "Comma separated vector; flips the direction to agree with it");

  ConstantsArgs con;
  auto* constants = app.add_subcommand("constants", "Print asymptotic efficiency constants");
  constants->set_help_flag("--help", "Print this help message and exit");  // frees -h
  constants->add_option("--alpha1", con.alpha1, "Mixture weight in (0.5, 1)");
  constants->add_option("--tau", con.tau, "Squared Mahalanobis distance");
  constants->add_option("--p", con.p, "Dimension");
  constants->add_option("--sigma", con.sigma, "Covariance, rows separated by ';'");
  constants->add_option("--h", con.h, "Mean difference, comma separated");

  SimulateArgs chat_args, msi_args;
  auto* sim_chat = app.add_subcommand("simulate-chat", "Monte Carlo estimate of C");
  sim_chat->add_option("-c,--config", chat_args.config, "JSON config")->required();
  sim_chat->add_option("-o,--output", chat_args.output, "CSV output")->required();
  sim_chat->add_option("-t,--threads", chat_args.threads, "Worker threads");
  auto* sim_msi = app.add_subcommand("simulate-msi", "Monte Carlo mean MSI sweep");
  sim_msi->add_option("-c,--config", msi_args.config, "JSON config")->required();
  sim_msi->add_option("-o,--output", msi_args.output, "CSV output")->required();
  sim_msi->add_option("-t,--threads", msi_args.threads, "Worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, error_kind_name(ErrorKind::kUsage), e.what());
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) return run_estimate(est, out);
    if (constants->parsed()) return run_constants(con, out);
    if (sim_chat->parsed()) return run_simulation(chat_args, true, err);
    if (sim_msi->parsed()) return run_simulation(msi_args, false, err);
  } catch (const Error& e) {
    report_error(err, error_kind_name(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace skewlda::cli
