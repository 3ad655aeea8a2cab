// Copyright (c) 2026 The homsum Authors. All Rights Reserved.
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

#include "homsum/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "homsum/experiments.hpp"
#include "homsum/kernel_io.hpp"
#include "homsum/numeric.hpp"

namespace homsum::cli {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "1" : "0"; }

void write_report(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ParseError("cannot open output file '" + out_path + "'");
  file << text;
}

std::vector<MomentProvider::Kind> parse_provider_list(const std::string& csv) {
  std::vector<MomentProvider::Kind> kinds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    kinds.push_back(MomentProvider::kind_from_name(item));
  }
  return kinds;
}

MomentProvider make_provider(const std::string& name, const WeightVector& w) {
  switch (MomentProvider::kind_from_name(name)) {
    case MomentProvider::Kind::gaussian: return MomentProvider::gaussian();
    case MomentProvider::Kind::rademacher: return MomentProvider::rademacher();
    case MomentProvider::Kind::poisson: return MomentProvider::poisson(w);
    case MomentProvider::Kind::custom:
      throw DomainError("custom providers are not addressable from the command line");
  }
  throw DomainError("unknown provider '" + name + "'");
}

void require_same_weights(const io::KernelFile& a, const io::KernelFile& b) {
  if (a.weights.size() != b.weights.size()) {
    throw SizeMismatchError("kernel files disagree on N");
  }
  for (int i = 1; i <= a.weights.size(); ++i) {
    if (a.weights.lambda(i) != b.weights.lambda(i)) {
      throw SizeMismatchError("kernel files disagree on lambda");
    }
  }
}

std::vector<std::vector<double>> load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON matrix: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("matrix file must be an array of arrays");
  std::vector<std::vector<double>> m;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError("matrix file must be an array of arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

// ---------------------------------------------------------------- contract

std::string run_contract(const std::string& kernel_path) {
  const io::KernelFile file = io::load_kernel_file(kernel_path);
  const ContractionTable table = contraction_table(file.kernel, file.weights);
  std::ostringstream out;
  out << "# quantity\tr\tl\tvalue\n";
  for (const auto& [rl, norm] : table.star_norms) {
    out << "star_norm\t" << rl.first << "\t" << rl.second << "\t" << fmt(norm) << "\n";
  }
  out << "g4_integral\t-\t-\t" << fmt(table.g4_integral) << "\n";
  if (table.cond3a) {
    out << "cond3a\t-\t-\t" << fmt(*table.cond3a) << "\n";
  }
  return out.str();
}

// ----------------------------------------------------------------- moments

std::string run_moments(const std::string& kernel_path, const std::string& provider_name,
                        const std::string& method) {
  const io::KernelFile file = io::load_kernel_file(kernel_path);
  const MomentProvider provider = make_provider(provider_name, file.weights);
  const bool is_poisson = provider.kind() == MomentProvider::Kind::poisson;

  std::optional<double> m4_struct;
  std::optional<double> m4_brute;
  if (method == "structured" || method == "both") {
    if (!is_poisson) {
      throw DomainError("the structured fourth moment applies to the poisson provider only");
    }
    m4_struct = fourth_moment_structured(file.kernel, file.weights);
  }
  if (method == "bruteforce" || method == "both") {
    m4_brute = moment_bruteforce(file.kernel, provider, 4);
  }
  if (method == "auto") {
    if (is_poisson) {
      m4_struct = fourth_moment_structured(file.kernel, file.weights);
      try {
        m4_brute = moment_bruteforce(file.kernel, provider, 4);
      } catch (const BudgetExceededError&) {
      }
    } else {
      m4_brute = moment_bruteforce(file.kernel, provider, 4);
    }
  }

  const double var = variance_exact(file.kernel);
  const double m4 = m4_struct ? *m4_struct
                              : (m4_brute ? *m4_brute : std::numeric_limits<double>::quiet_NaN());
  std::ostringstream out;
  out << "# key\tvalue\n";
  out << "q\t" << file.kernel.order() << "\n";
  out << "N\t" << file.kernel.size() << "\n";
  out << "provider\t" << provider.name() << "\n";
  out << "var_exact\t" << fmt(var) << "\n";
  if (m4_struct) out << "m4_structured\t" << fmt(*m4_struct) << "\n";
  if (m4_brute) out << "m4_bruteforce\t" << fmt(*m4_brute) << "\n";
  if (m4_struct && m4_brute) {
    const double denom = std::max({std::abs(*m4_struct), std::abs(*m4_brute), 1e-300});
    out << "m4_rel_diff\t" << fmt(std::abs(*m4_struct - *m4_brute) / denom) << "\n";
  }
  out << "m4\t" << fmt(m4) << "\n";
  out << "gap\t" << fmt(m4 - 3.0 * var * var) << "\n";
  return out.str();
}

// ---------------------------------------------------------------- diagnose

std::string run_diagnose(const std::string& kernel_path, const std::string& provider_name) {
  const io::KernelFile file = io::load_kernel_file(kernel_path);
  const MomentProvider provider = make_provider(provider_name, file.weights);
  const DiagnosticsReport report = diagnose(file.kernel, file.weights, provider);

  std::ostringstream out;
  out << "# key\tvalue\n";
  out << "q\t" << report.order << "\n";
  out << "N\t" << report.size << "\n";
  out << "provider\t" << provider.name() << "\n";
  out << "method\t" << to_string(report.method) << "\n";
  out << "var_exact\t" << fmt(report.var_exact) << "\n";
  out << "m4_exact\t" << fmt(report.m4_exact) << "\n";
  out << "gap\t" << fmt(report.gap) << "\n";
  if (report.cond3a) out << "cond3a\t" << fmt(*report.cond3a) << "\n";
  if (report.table) {
    for (const auto& [rl, norm] : report.table->star_norms) {
      out << "star_norm_" << rl.first << "_" << rl.second << "\t" << fmt(norm) << "\n";
    }
    out << "g4_integral\t" << fmt(report.table->g4_integral) << "\n";
    out << "max_contraction\t" << fmt(report.table->max_offdiagonal_norm()) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- simulate

std::string run_simulate(const std::string& kernel_path, const std::string& provider_name,
                         int samples, std::uint64_t seed, int streams, int threads,
                         std::optional<double> sigma2) {
  const io::KernelFile file = io::load_kernel_file(kernel_path);
  const MomentProvider provider = make_provider(provider_name, file.weights);
  const double target = sigma2 ? *sigma2 : variance_exact(file.kernel);
  const SimulationReport report = simulate(file.kernel, file.weights, provider, samples,
                                           RngSpec{seed, streams}, target, threads);
  std::ostringstream out;
  out << "# key\tvalue\n";
  out << "provider\t" << provider.name() << "\n";
  out << "n_samples\t" << report.n_samples << "\n";
  out << "sigma2\t" << fmt(target) << "\n";
  out << "mean\t" << fmt(report.mean) << "\n";
  out << "variance\t" << fmt(report.variance) << "\n";
  out << "w1\t" << fmt(report.w1) << "\n";
  out << "ks\t" << fmt(report.ks) << "\n";
  out << "m4_empirical\t" << fmt(report.m4_empirical) << "\n";
  out << "se_m4\t" << fmt(report.se_m4) << "\n";
  return out.str();
}

// ------------------------------------------------------------ universality

std::string run_universality(const std::string& family_name, int q, double lambda0,
                             const std::string& providers_csv, const std::string& grid_csv,
                             int samples, std::uint64_t seed, int streams, int threads,
                             const UniversalityThresholds& thresholds) {
  const KernelFamily family = family_by_name(family_name, q, lambda0);
  const std::vector<MomentProvider::Kind> providers = parse_provider_list(providers_csv);
  std::vector<int> grid;
  {
    std::stringstream ss(grid_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) grid.push_back(std::stoi(item));
    }
  }
  const UniversalityReport report = universality_run(
      family, providers, grid, samples, RngSpec{seed, streams}, thresholds, threads);

  std::ostringstream out;
  out << "# family\tn\tN\tprovider\tvar_exact\tgap\tmax_contraction\tcond3a\tw1\tks\t"
         "m4_empirical\n";
  for (const UniversalityRow& row : report.rows) {
    out << report.family << "\t" << row.n << "\t" << row.size << "\t" << row.provider << "\t"
        << fmt(row.var_exact) << "\t" << fmt(row.gap) << "\t" << fmt(row.max_contraction)
        << "\t" << fmt(row.cond3a.value_or(std::numeric_limits<double>::quiet_NaN())) << "\t"
        << fmt(row.w1) << "\t" << fmt(row.ks) << "\t" << fmt(row.m4_empirical) << "\n";
  }
  out << "\n";
  out << "# provider\tgap_abs_decreasing\tcontraction_decreasing\tw1_decreased\tgap_final\t"
         "contraction_final\tw1_final\tgap_below\tcontraction_below\tw1_below\n";
  for (const ProviderTrend& t : report.trends) {
    out << t.provider << "\t" << fmt(t.gap_abs_decreasing) << "\t"
        << fmt(t.contraction_decreasing) << "\t" << fmt(t.w1_decreased) << "\t"
        << fmt(t.gap_final) << "\t" << fmt(t.contraction_final) << "\t" << fmt(t.w1_final)
        << "\t" << fmt(t.gap_below) << "\t" << fmt(t.contraction_below) << "\t"
        << fmt(t.w1_below) << "\n";
  }
  return out.str();
}

// --------------------------------------------------------- vector-diagnose

std::string run_vector_diagnose(const std::vector<std::string>& kernel_paths,
                                const std::string& cov_path) {
  if (kernel_paths.empty()) throw DomainError("need at least one --kernel");
  std::vector<io::KernelFile> files;
  for (const std::string& path : kernel_paths) files.push_back(io::load_kernel_file(path));
  for (std::size_t i = 1; i < files.size(); ++i) require_same_weights(files[0], files[i]);

  std::vector<SymmetricKernel> kernels;
  for (const io::KernelFile& f : files) kernels.push_back(f.kernel);
  const std::size_t d = kernels.size();

  std::vector<std::vector<double>> C;
  if (cov_path.empty()) {
    C.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) C[i][i] = 1.0;
  } else {
    C = load_matrix_file(cov_path);
  }

  const VectorDiagnostics report = vector_diagnose(kernels, files[0].weights, C);
  std::ostringstream out;
  out << "# i\tj\tcross_cov\ttarget\tresidual\n";
  for (int i = 0; i < report.dimension; ++i) {
    for (int j = 0; j < report.dimension; ++j) {
      const std::size_t idx =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(report.dimension) +
          static_cast<std::size_t>(j);
      out << (i + 1) << "\t" << (j + 1) << "\t" << fmt(report.cross[idx]) << "\t"
          << fmt(C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) << "\t"
          << fmt(report.residual[idx]) << "\n";
    }
  }
  out << "\n";
  out << "# j\tq\tvar_exact\tm4\tgap_vs_target\tcondition_stat\tstat_kind\n";
  for (int j = 0; j < report.dimension; ++j) {
    const VectorComponent& c = report.components[static_cast<std::size_t>(j)];
    out << (j + 1) << "\t" << c.order << "\t" << fmt(c.var) << "\t" << fmt(c.m4) << "\t"
        << fmt(c.gap_vs_target) << "\t" << fmt(c.stat) << "\t"
        << (c.stat_is_cond3a ? "cond3a" : "max_contraction") << "\n";
  }
  return out.str();
}

// ------------------------------------------------------------ product-check

std::string run_product_check(const std::vector<std::string>& kernel_paths) {
  if (kernel_paths.empty() || kernel_paths.size() > 2) {
    throw DomainError("product-check expects one or two --kernel files");
  }
  const io::KernelFile first = io::load_kernel_file(kernel_paths[0]);
  const io::KernelFile second =
      kernel_paths.size() == 2 ? io::load_kernel_file(kernel_paths[1]) : first;
  require_same_weights(first, second);

  const MomentProvider provider = MomentProvider::poisson(first.weights);
  const double lhs =
      product_moment_bruteforce({{&first.kernel, 2}, {&second.kernel, 2}}, provider);

  const GeneralKernel g1 = embed(first.kernel);
  const GeneralKernel g2 = embed(second.kernel);
  const int p = g1.order();
  const int q = g2.order();
  std::ostringstream out;
  out << "# key\tvalue\n";
  out << "p\t" << p << "\n";
  out << "q\t" << q << "\n";
  out << "N\t" << first.kernel.size() << "\n";
  KahanSum rhs;
  for (int k = std::abs(q - p); k <= p + q; ++k) {
    const double n = l2_norm(gamma_operator(g1, g2, k, first.weights));
    const double term = factorial(k) * n * n;
    out << "term_k" << k << "\t" << fmt(term) << "\n";
    rhs.add(term);
  }
  const double denom = std::max({std::abs(lhs), std::abs(rhs.value()), 1e-300});
  out << "lhs_bruteforce\t" << fmt(lhs) << "\n";
  out << "rhs_gamma_sum\t" << fmt(rhs.value()) << "\n";
  out << "rel_error\t" << fmt(std::abs(lhs - rhs.value()) / denom) << "\n";
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous-sum diagnostics: contractions, exact moments, and Monte Carlo "
               "normal-approximation checks for Gaussian, Rademacher, and normalized-Poisson "
               "coordinate sequences"};
  app.name("homsum");
  app.require_subcommand(1);

  std::string kernel_path;
  std::vector<std::string> kernel_paths;
  std::string provider_name = "poisson";
  std::string method = "auto";
  std::string family_name = "counterexample";
  std::string providers_csv = "gaussian,rademacher,poisson";
  std::string grid_csv = "8,32,128";
  std::string cov_path;
  std::string out_path;
  int samples = 100000;
  std::uint64_t seed = 0;
  int streams = 8;
  int threads = 1;
  int q = 2;
  double lambda0 = 1.0;
  std::optional<double> sigma2;
  UniversalityThresholds thresholds;

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
  };

  CLI::App* contract_cmd =
      app.add_subcommand("contract", "contraction-norm table of a kernel");
  contract_cmd->add_option("--kernel", kernel_path, "kernel JSON file")->required();
  add_out(contract_cmd);

  CLI::App* moments_cmd =
      app.add_subcommand("moments", "exact second and fourth moments of a kernel");
  moments_cmd->add_option("--kernel", kernel_path, "kernel JSON file")->required();
  moments_cmd->add_option("--provider", provider_name,
                          "gaussian | rademacher | poisson (default poisson)");
  moments_cmd->add_option("--method", method, "auto | bruteforce | structured | both")
      ->check(CLI::IsMember({"auto", "bruteforce", "structured", "both"}));
  add_out(moments_cmd);

  CLI::App* diagnose_cmd =
      app.add_subcommand("diagnose", "full per-kernel diagnostics report");
  diagnose_cmd->add_option("--kernel", kernel_path, "kernel JSON file")->required();
  diagnose_cmd->add_option("--provider", provider_name,
                           "gaussian | rademacher | poisson (default poisson)");
  add_out(diagnose_cmd);

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo distances against the normal target");
  simulate_cmd->add_option("--kernel", kernel_path, "kernel JSON file")->required();
  simulate_cmd->add_option("--provider", provider_name,
                           "gaussian | rademacher | poisson (default poisson)");
  simulate_cmd->add_option("--samples", samples, "number of Monte Carlo samples");
  simulate_cmd->add_option("--seed", seed, "RNG seed");
  simulate_cmd->add_option("--streams", streams, "independent substreams");
  simulate_cmd->add_option("--threads", threads, "worker threads (output-invariant)");
  simulate_cmd->add_option("--sigma2", sigma2,
                           "target variance (default: exact kernel variance)");
  add_out(simulate_cmd);

  CLI::App* universality_cmd = app.add_subcommand(
      "universality", "kernel-family diagnostics across providers and grid points");
  universality_cmd->add_option("--family", family_name,
                               "counterexample | pair-partition | q1-escape");
  universality_cmd->add_option("--q", q, "order for the counterexample family");
  universality_cmd->add_option("--lambda0", lambda0,
                               "constant weight override for the counterexample family");
  universality_cmd->add_option("--providers", providers_csv, "comma-separated provider list");
  universality_cmd->add_option("--grid", grid_csv, "comma-separated increasing n values");
  universality_cmd->add_option("--samples", samples, "Monte Carlo samples per cell");
  universality_cmd->add_option("--seed", seed, "RNG seed");
  universality_cmd->add_option("--streams", streams, "independent substreams");
  universality_cmd->add_option("--threads", threads, "worker threads (output-invariant)");
  universality_cmd->add_option("--gap-threshold", thresholds.gap, "final |gap| flag threshold");
  universality_cmd->add_option("--contraction-threshold", thresholds.contraction,
                               "final contraction flag threshold");
  universality_cmd->add_option("--w1-threshold", thresholds.w1, "final w1 flag threshold");
  add_out(universality_cmd);

  CLI::App* vector_cmd = app.add_subcommand(
      "vector-diagnose", "componentwise diagnostics for a vector of kernels");
  vector_cmd->add_option("--kernel", kernel_paths, "kernel JSON file (repeatable)")
      ->required();
  vector_cmd->add_option("--cov", cov_path,
                         "target covariance matrix JSON file (default identity)");
  add_out(vector_cmd);

  CLI::App* product_cmd = app.add_subcommand(
      "product-check", "second moment of a product versus the orthogonal chaos sum");
  product_cmd->add_option("--kernel", kernel_paths, "kernel JSON file (one or two)")
      ->required();
  add_out(product_cmd);

  contract_cmd->callback([&] { write_report(run_contract(kernel_path), out_path, out); });
  moments_cmd->callback(
      [&] { write_report(run_moments(kernel_path, provider_name, method), out_path, out); });
  diagnose_cmd->callback(
      [&] { write_report(run_diagnose(kernel_path, provider_name), out_path, out); });
  simulate_cmd->callback([&] {
    write_report(run_simulate(kernel_path, provider_name, samples, seed, streams, threads,
                              sigma2),
                 out_path, out);
  });
  universality_cmd->callback([&] {
    write_report(run_universality(family_name, q, lambda0, providers_csv, grid_csv, samples,
                                  seed, streams, threads, thresholds),
                 out_path, out);
  });
  vector_cmd->callback(
      [&] { write_report(run_vector_diagnose(kernel_paths, cov_path), out_path, out); });
  product_cmd->callback([&] { write_report(run_product_check(kernel_paths), out_path, out); });

  std::vector<const char*> argv;
  argv.push_back("homsum");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace homsum::cli
