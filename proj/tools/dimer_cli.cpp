// Command-line front end: exact matching counts, cluster kernels, the 1/d
// series, and beta factor tables, emitted as deterministic JSON or CSV.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/oracle.hpp"
#include "dimer/report.hpp"

namespace {

using namespace dimer;

struct CommonOpts {
  std::string out;
  std::string format = "json";
  long long budget = 100'000'000;
  unsigned precision = 50;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out,
                  "output file; relative paths are resolved against DIMER_OUT_DIR");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--budget", c.budget, "tuple budget for brute-force enumeration");
  cmd->add_option("--precision", c.precision, "significant digits for decimal output");
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    dims.push_back(std::stoi(part));
  }
  if (dims.empty()) throw std::invalid_argument("empty dimension list");
  return dims;
}

std::vector<std::vector<int>> parse_schedule(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) {
    if (group.empty()) continue;
    out.push_back(parse_dims(group));
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stoll(part));
  }
  return out;
}

void emit(const Json& manifest, const std::string& csv, const CommonOpts& c) {
  std::string payload;
  if (c.format == "json") {
    payload = manifest.dump(2) + "\n";
  } else {
    Json header = manifest;
    header.erase("result");
    payload = "# " + header.dump() + "\n" + csv;
  }
  if (c.out.empty()) {
    std::cout << payload;
    return;
  }
  std::filesystem::path path(c.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("DIMER_OUT_DIR")) path = std::filesystem::path(dir) / path;
  }
  std::ofstream file(path);
  if (!file) throw std::invalid_argument("cannot open output file " + path.string());
  file << payload;
}

Json manifest_for(const std::string& command, Json config) {
  Json j;
  j["command"] = command;
  j["config"] = std::move(config);
  j["version"] = kVersion;
  return j;
}

std::string decimal(const Real& x, unsigned digits) { return real_str(x, digits); }

int run_matchings(const std::string& dims_text, int bound, const CommonOpts& c) {
  auto dims = parse_dims(dims_text);
  TorusLattice lat = build_torus(dims);
  auto pf = partition_function(lat, bound);

  Json config{{"dims", dims}, {"bound", bound}, {"format", c.format},
              {"precision", c.precision}};
  Json manifest = manifest_for("matchings", config);
  Json result;
  result["dims"] = dims;
  result["N"] = lat.vertex_count();
  result["count"] = pf.matchings.get_str();
  result["Z"] = rat_str(pf.Z);
  result["lambda_N"] = decimal(pf.lambda_N, c.precision);
  manifest["result"] = result;

  std::ostringstream csv;
  csv << "N,count,Z_p,Z_q,lambda_N\n"
      << lat.vertex_count() << "," << pf.matchings.get_str() << ","
      << pf.Z.get_num().get_str() << "," << pf.Z.get_den().get_str() << ","
      << decimal(pf.lambda_N, c.precision) << "\n";
  emit(manifest, csv.str(), c);
  return 0;
}

KernelOptions::Engine parse_engine(const std::string& name) {
  if (name == "auto") return KernelOptions::Engine::kAuto;
  if (name == "brute") return KernelOptions::Engine::kBruteForce;
  if (name == "pattern") return KernelOptions::Engine::kPattern;
  throw std::invalid_argument("unknown engine " + name);
}

int run_kernels(int s, int d, bool all_d, bool appendix, const std::string& sizes,
                const std::string& engine, bool enable_s5, const CommonOpts& c) {
  KernelOptions opts;
  opts.engine = parse_engine(engine);
  opts.budget = c.budget;
  opts.allow_order5 = enable_s5;
  auto schedule = sizes.empty() ? std::vector<std::vector<int>>{} : parse_schedule(sizes);

  Json config{{"s", s},         {"d", d},           {"all_d", all_d},
              {"appendix", appendix}, {"sizes", sizes},  {"engine", engine},
              {"budget", c.budget},   {"format", c.format}, {"precision", c.precision}};
  Json manifest = manifest_for("kernels", config);
  Json result;
  std::ostringstream csv;
  csv << "d,N,p,q\n";

  if (all_d) {
    KernelFamily fam = compute_kernel_family(s, opts);
    result = to_json(fam);
    for (const auto& [dd, res] : fam.by_d)
      for (const auto& sample : res.per_N)
        csv << dd << "," << sample.N << "," << sample.value.get_num().get_str() << ","
            << sample.value.get_den().get_str() << "\n";
  } else {
    KernelResult res = compute_kernel(s, d, opts, schedule);
    result = to_json(res);
    for (const auto& sample : res.per_N)
      csv << d << "," << sample.N << "," << sample.value.get_num().get_str() << ","
          << sample.value.get_den().get_str() << "\n";
  }

  if (appendix) {
    if (s != 2 || (d != 1 && !all_d))
      throw std::invalid_argument("--appendix applies to the s=2, d=1 breakdown");
    AppendixReport rep = appendix_breakdown(opts, schedule);
    result["appendix"] = to_json(rep);
  }
  manifest["result"] = result;
  emit(manifest, csv.str(), c);
  return 0;
}

int run_series(int order, std::optional<int> eval_d, const std::string& kernel_files,
               const CommonOpts& c) {
  std::map<int, std::map<int, Rat>> kernel_d_polys;
  if (!kernel_files.empty()) {
    std::stringstream ss(kernel_files);
    std::string path;
    while (std::getline(ss, path, ',')) {
      if (path.empty()) continue;
      std::ifstream in(path);
      if (!in) throw std::invalid_argument("cannot read kernel file " + path);
      Json j = Json::parse(in);
      auto [s, poly] = kernel_d_poly_from_json(j);
      kernel_d_polys[s] = std::move(poly);
    }
  } else {
    if (2 * order > 4)
      throw std::invalid_argument(
          "order " + std::to_string(order) +
          " needs kernels J_5..J_" + std::to_string(2 * order) +
          " which are beyond the built-in s <= 4 pipeline; pass them with --kernels");
    KernelOptions opts;
    opts.budget = c.budget;
    for (int s = 2; s <= 2 * order; ++s)
      kernel_d_polys[s] = compute_kernel_family(s, opts).d_poly;
  }

  LambdaExpansion lam = lambda_expansion(kernel_d_polys, order, eval_d, c.precision);

  Json config{{"K", order},
              {"eval_d", eval_d ? Json(*eval_d) : Json(nullptr)},
              {"kernels", kernel_files},
              {"format", c.format},
              {"precision", c.precision}};
  Json manifest = manifest_for("series", config);
  manifest["result"] = to_json(lam);

  std::ostringstream csv;
  csv << "i,p,q\n";
  for (int i = 0; i < lam.order; ++i)
    csv << (i + 1) << "," << lam.c[i].get_num().get_str() << ","
        << lam.c[i].get_den().get_str() << "\n";
  emit(manifest, csv.str(), c);
  return 0;
}

int run_beta(const std::string& j_text, std::optional<std::int64_t> i_fixed,
             const std::string& n_list, const CommonOpts& c) {
  auto Ns = parse_int_list(n_list);
  if (Ns.empty()) throw std::invalid_argument("beta needs --N with at least one size");
  bool j_mode = !j_text.empty();
  if (j_mode && i_fixed) throw std::invalid_argument("--j and --i are mutually exclusive");
  if (!j_mode && !i_fixed) throw std::invalid_argument("beta needs --j or --i");

  Json config{{"j", j_text},
              {"i", i_fixed ? Json(*i_fixed) : Json(nullptr)},
              {"N", Ns},
              {"format", c.format},
              {"precision", c.precision}};
  Json manifest = manifest_for("beta", config);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "N,i,beta_p,beta_q,log_beta_over_N,g_j,abs_diff\n";

  Rat j_value;
  Real g(0);
  if (j_mode) {
    j_value = parse_rat(j_text);
    g = beta_asym(j_value);
  }
  for (std::int64_t N : Ns) {
    std::int64_t i;
    if (j_mode) {
      Rat jn = j_value * Rat(Int(N));
      Int fl;
      mpz_fdiv_q(fl.get_mpz_t(), jn.get_num().get_mpz_t(), jn.get_den().get_mpz_t());
      i = fl.get_si();
    } else {
      i = *i_fixed;
    }
    Rat beta = beta_exact(N, i);
    Real log_over_n = log(to_real(beta)) / to_real(Int(N));
    Json row;
    row["N"] = N;
    row["i"] = i;
    row["beta"] = rat_str(beta);
    row["log_beta_over_N"] = decimal(log_over_n, c.precision);
    std::string g_str, diff_str;
    if (j_mode) {
      g_str = decimal(g, c.precision);
      diff_str = decimal(abs(log_over_n - g), c.precision);
      row["g_j"] = g_str;
      row["abs_diff"] = diff_str;
    } else {
      diff_str = decimal(abs(to_real(beta) - 1), c.precision);
      row["abs_beta_minus_1"] = diff_str;
    }
    rows.push_back(row);
    csv << N << "," << i << "," << beta.get_num().get_str() << "," << beta.get_den().get_str()
        << "," << decimal(log_over_n, c.precision) << "," << g_str << "," << diff_str << "\n";
  }
  Json result;
  result["mode"] = j_mode ? "j" : "i";
  if (j_mode) {
    result["j"] = rat_str(j_value);
    result["g_j"] = decimal(g, c.precision);
  }
  result["rows"] = rows;
  manifest["result"] = result;
  emit(manifest, csv.str(), c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  ensure_real_precision(50);
  CLI::App app{"exact dimer cluster-expansion toolkit"};
  app.require_subcommand(1);

  int exit_code = 0;
  CommonOpts common;

  auto* matchings = app.add_subcommand("matchings", "count perfect matchings and report Z, lambda_N");
  std::string m_dims;
  int m_bound = 36;
  matchings->add_option("--dims", m_dims, "torus sides, comma separated")->required();
  matchings->add_option("--bound", m_bound, "vertex-count bound for brute force");
  add_common(matchings, common);
  matchings->callback([&] {
    ensure_real_precision(common.precision);
    exit_code = run_matchings(m_dims, m_bound, common);
  });

  auto* kernels = app.add_subcommand("kernels", "exact cluster kernels and their limits");
  int k_s = 2, k_d = 1;
  bool k_all_d = false, k_appendix = false, k_enable_s5 = false;
  std::string k_sizes, k_engine = "auto";
  kernels->add_option("--s", k_s, "cluster order")->required();
  kernels->add_option("--d", k_d, "dimension");
  kernels->add_flag("--all-d", k_all_d, "fit the 1/d polynomial across dimensions");
  kernels->add_flag("--appendix", k_appendix, "emit the s=2, d=1 A..F term breakdown");
  kernels->add_option("--sizes", k_sizes, "size schedule, e.g. \"6;8;10\" or \"9,10;9,12\"");
  kernels->add_option("--engine", k_engine, "auto|brute|pattern");
  kernels->add_flag("--enable-s5", k_enable_s5, "unlock the gated order s = 5");
  add_common(kernels, common);
  kernels->callback([&] {
    ensure_real_precision(common.precision);
    exit_code = run_kernels(k_s, k_d, k_all_d, k_appendix, k_sizes, k_engine, k_enable_s5, common);
  });

  auto* series = app.add_subcommand("series", "lambda_d expansion coefficients");
  int s_order = 2;
  int s_eval_d = 0;
  std::string s_kernels;
  series->add_option("--K", s_order, "truncation order")->required();
  series->add_option("--eval-d", s_eval_d, "evaluate the partial sum at this dimension")
      ->check(CLI::PositiveNumber);
  series->add_option("--kernels", s_kernels, "comma-separated kernel JSON reports");
  add_common(series, common);
  series->callback([&] {
    ensure_real_precision(common.precision);
    exit_code = run_series(s_order, s_eval_d > 0 ? std::optional<int>(s_eval_d) : std::nullopt,
                           s_kernels, common);
  });

  auto* beta = app.add_subcommand("beta", "beta(N,i) factors, exact and asymptotic");
  std::string b_j, b_N;
  std::int64_t b_i = -1;
  beta->add_option("--j", b_j, "density j, e.g. 0.25 or 1/4");
  beta->add_option("--i", b_i, "fixed perturbation count");
  beta->add_option("--N", b_N, "comma-separated sizes")->required();
  add_common(beta, common);
  beta->callback([&] {
    ensure_real_precision(common.precision);
    exit_code = run_beta(b_j, b_i >= 0 ? std::optional<std::int64_t>(b_i) : std::nullopt,
                         b_N, common);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dimer::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const dimer::ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return exit_code;
}
