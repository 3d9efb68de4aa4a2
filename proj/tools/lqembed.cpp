// lqembed: eigenvalue tables, embedding certificates, the λ-search and
// representation checks from the command line.
//
//   lqembed lambda-table --n 3 --q 1 --M 10
//   lqembed certify --n 3 --f lp-ball:4 --q 1
//   lqembed search --n 3 --f zonal-Y4 --q 0.5 --q 1 --q 3 --q 5
//   lqembed verify --mode even-integer --n 3 --k 2 --lambda 0.1
//
// Every report carries a "config" object; passing the report back through
// --config reproduces it. Exit codes: 0 certified/verified, 1 usage or
// config error, 2 refuted or failed verification, 3 inconclusive.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqembed/certify.hpp"
#include "lqembed/errors.hpp"
#include "lqembed/funk_hecke.hpp"
#include "lqembed/inversion.hpp"
#include "lqembed/norms.hpp"
#include "lqembed/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lqembed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRefuted = 2;
constexpr int kExitInconclusive = 3;
constexpr const char* kCacheEnv = "LQEMBED_GRID_CACHE";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 3;
  std::vector<double> q;
  std::string q_range;  // lo:hi:count
  std::string f = "euclidean";
  double lambda = 0.0;
  bool search = false;
  int M = 16;
  int resolution = 36;
  std::string r = "auto";
  std::uint64_t seed = 1;
  std::string out;
  std::string format;  // json, or csv for lambda-table when unset
  // search
  double lambda_hi = 1.0;
  double lambda_min = 1e-8;
  double rel_tol = 1e-4;
  int convexity_trials = 100000;
  bool refine_q = false;
  // verify
  std::string mode = "levy";
  int k = 2;
  int points = 200;
  double tolerance = 1e-6;
  std::string density;
  std::string density_out;
};

json config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"n", c.n},
              {"q", c.q},
              {"Q_range", c.q_range},
              {"f", c.f},
              {"lambda", c.lambda},
              {"search", c.search},
              {"M", c.M},
              {"resolution", c.resolution},
              {"r", c.r},
              {"seed", c.seed},
              {"format", c.format},
              {"lambda_hi", c.lambda_hi},
              {"lambda_min", c.lambda_min},
              {"rel_tol", c.rel_tol},
              {"convexity_trials", c.convexity_trials},
              {"refine_q", c.refine_q},
              {"mode", c.mode},
              {"k", c.k},
              {"points", c.points},
              {"tolerance", c.tolerance},
              {"density", c.density},
              {"density_out", c.density_out}};
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

// Accepts a bare config object or a report carrying one under "config".
void load_config_file(const fs::path& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  if (j.contains("config")) j = j.at("config");
  try {
    take(j, "n", c.n);
    if (j.contains("q")) c.q = j.at("q").is_array() ? j.at("q").get<std::vector<double>>() : std::vector<double>{j.at("q").get<double>()};
    take(j, "Q_range", c.q_range);
    take(j, "f", c.f);
    take(j, "lambda", c.lambda);
    take(j, "search", c.search);
    take(j, "M", c.M);
    take(j, "resolution", c.resolution);
    if (j.contains("r")) c.r = j.at("r").is_string() ? j.at("r").get<std::string>() : std::to_string(j.at("r").get<int>());
    take(j, "seed", c.seed);
    take(j, "format", c.format);
    take(j, "lambda_hi", c.lambda_hi);
    take(j, "lambda_min", c.lambda_min);
    take(j, "rel_tol", c.rel_tol);
    take(j, "convexity_trials", c.convexity_trials);
    take(j, "refine_q", c.refine_q);
    take(j, "mode", c.mode);
    take(j, "k", c.k);
    take(j, "points", c.points);
    take(j, "tolerance", c.tolerance);
    take(j, "density", c.density);
    take(j, "density_out", c.density_out);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

std::vector<double> parse_q_range(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1) {
    throw ConfigError("--Q-range expects lo:hi:count, got '" + spec + "'");
  }
  return QSet::range(lo, hi, count).samples();
}

QSet q_set(const RunConfig& c) {
  std::vector<double> samples = c.q;
  if (!c.q_range.empty()) {
    const auto extra = parse_q_range(c.q_range);
    samples.insert(samples.end(), extra.begin(), extra.end());
  }
  if (samples.empty()) throw ConfigError("no exponent given (use --q or --Q-range)");
  return QSet::make(std::move(samples));
}

int resolve_r(const RunConfig& c, double q_max) {
  if (c.r == "auto") return auto_smoothness(c.n, q_max);
  try {
    std::size_t used = 0;
    const int r = std::stoi(c.r, &used);
    if (used != c.r.size() || r < 1) throw std::invalid_argument(c.r);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("--r expects a positive integer or 'auto', got '" + c.r + "'");
  }
}

std::optional<fs::path> grid_cache_dir() {
  if (const char* dir = std::getenv(kCacheEnv); dir && *dir) return fs::path(dir);
  return std::nullopt;
}

bool is_perturbation_spec(const std::string& f) {
  return f == "zonal-Y4" || f == "zero" || fs::exists(f);
}

HarmonicCoefficients perturbation_coefficients(const RunConfig& c) {
  if (c.f == "zonal-Y4") return zonal_y4(c.n);
  if (c.f == "zero") {
    HarmonicCoefficients z(c.n, 0);
    z.set_even(true);
    return z;
  }
  auto coeffs = read_coefficients_csv(c.f);
  if (coeffs.dimension() != c.n) {
    throw ConfigError("coefficient file " + c.f + " has n=" + std::to_string(coeffs.dimension()) +
                      ", expected n=" + std::to_string(c.n));
  }
  return coeffs;
}

NormSpec make_norm(const RunConfig& c) {
  const auto suffix = [&](const std::string& prefix) -> std::optional<std::string> {
    if (c.f.rfind(prefix, 0) == 0) return c.f.substr(prefix.size());
    return std::nullopt;
  };
  try {
    if (c.f == "euclidean") return NormSpec::euclidean(c.n);
    if (auto p = suffix("lp-ball:")) return NormSpec::lp_ball(c.n, std::stod(*p));
    if (auto k = suffix("lq-power:")) return NormSpec::lq_power(c.n, std::stoi(*k), c.lambda);
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed --f value '" + c.f + "'");
  }
  if (is_perturbation_spec(c.f)) return NormSpec::perturbation(perturbation_coefficients(c), c.lambda);
  throw ConfigError("unknown --f value '" + c.f +
                    "' (euclidean, zonal-Y4, zero, lp-ball:p, lq-power:k or a coefficient CSV file)");
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out);
  if (!out) throw std::runtime_error("cannot write " + c.out);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + c.out);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int exit_code_for(const std::vector<EmbeddingCertificate>& certs) {
  bool inconclusive = false;
  for (const auto& c : certs) {
    if (c.verdict == Verdict::refuted_negative_density) return kExitRefuted;
    if (c.verdict == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? kExitInconclusive : kExitOk;
}

std::string certificates_csv(const std::vector<EmbeddingCertificate>& certs, const std::string& label, double lambda) {
  std::ostringstream os;
  os << "norm_spec,lambda,q,r,M,lemma2_lhs,c_q,min_density,truncation_bound,quadrature_margin,reconstruction_error,verdict,seed\n";
  for (const auto& c : certs) {
    os << label << ',' << format_double(lambda) << ',' << format_double(c.q) << ',' << c.r << ',' << c.M << ','
       << format_double(c.lemma2_lhs) << ',' << format_double(c.c_q) << ',' << format_double(c.min_density) << ','
       << format_double(c.truncation_bound) << ',' << format_double(c.quadrature_margin) << ','
       << format_double(c.reconstruction_error) << ',' << to_string(c.verdict) << ',' << c.seed << '\n';
  }
  return os.str();
}

std::vector<EmbeddingCertificate> certify_each(const NormSpec& norm, const std::vector<double>& qs, int r,
                                               const SphereGrid& grid, int M, const CertifyOptions& opts) {
  std::vector<std::future<EmbeddingCertificate>> jobs;
  for (double q : qs) jobs.push_back(std::async(std::launch::async, [&, q] { return certify_lemma2(norm, q, r, grid, M, opts); }));
  std::vector<EmbeddingCertificate> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

json certificate_entry(const EmbeddingCertificate& cert, const NormSpec& norm, double lambda) {
  json j = to_json(cert);
  j["norm_spec"] = to_json(norm);
  j["n"] = norm.dimension();
  j["lambda"] = lambda;
  return j;
}

// A density file holds one DensityResult or an array of them (one per q);
// with an array the entry matching the first requested q is used.
DensityResult load_density(const fs::path& path, const std::vector<double>& q) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open density file " + path.string());
  json j;
  try {
    in >> j;
    if (!j.is_array()) return density_from_json(j);
    if (j.empty()) throw ConfigError("density file " + path.string() + " is empty");
    if (q.empty()) return density_from_json(j.front());
    for (const auto& entry : j)
      if (entry.at("q").get<double>() == q.front()) return density_from_json(entry);
    return density_from_json(j.front());
  } catch (const json::exception& e) {
    throw ConfigError("malformed density file " + path.string() + ": " + e.what());
  }
}

// ------------------------------------------------------------------ commands

int cmd_lambda_table(const RunConfig& c) {
  const QSet Q = q_set(c);
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,q,m,lambda_closed,lambda_oracle,rel_err\n";
  for (double q : Q.samples()) {
    const auto table = build_eigenvalue_table(c.n, q, c.M);
    for (int m = 0; m <= c.M; m += 2) {
      const double closed = table[m];
      const double oracle = lambda_oracle_refined(c.n, m, q);
      const double rel = std::abs(closed - oracle) / std::abs(oracle);
      rows.push_back({{"n", c.n}, {"q", q}, {"m", m}, {"lambda_closed", closed}, {"lambda_oracle", oracle}, {"rel_err", rel}});
      csv << c.n << ',' << format_double(q) << ',' << m << ',' << format_double(closed) << ',' << format_double(oracle)
          << ',' << format_double(rel) << '\n';
    }
  }
  if (c.format == "csv") {
    emit(c, csv.str());
  } else {
    emit(c, json{{"config", config_to_json(c)}, {"rows", rows}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& c) {
  const QSet Q = q_set(c);
  const int r = resolve_r(c, Q.max());
  const NormSpec norm = make_norm(c);
  const SphereGrid grid = cached_grid(c.n, c.resolution, grid_cache_dir());
  const CertifyOptions opts{20, c.seed};

  const auto certs = certify_each(norm, Q.samples(), r, grid, c.M, opts);
  const ConvexityResult convexity = convexity_check(norm, c.convexity_trials, c.seed);

  if (!c.density_out.empty()) {
    json densities = json::array();
    for (double q : Q.samples()) densities.push_back(to_json(density_for(norm, q, r, grid, c.M)));
    write_json(densities.size() == 1 ? densities[0] : densities, c.density_out);
  }

  if (c.format == "csv") {
    emit(c, certificates_csv(certs, norm.label(), c.lambda));
  } else {
    json list = json::array();
    for (const auto& cert : certs) list.push_back(certificate_entry(cert, norm, c.lambda));
    json report{{"config", config_to_json(c)},
                {"r_resolved", r},
                {"norm_spec", to_json(norm)},
                {"convexity", to_json(convexity)},
                {"certificates", list}};
    emit(c, report.dump(2) + "\n");
  }
  int code = exit_code_for(certs);
  if (code == kExitOk && !convexity.pass) code = kExitRefuted;
  return code;
}

int cmd_search(const RunConfig& c) {
  if (!is_perturbation_spec(c.f)) throw ConfigError("search needs a perturbation f (zonal-Y4, zero or a coefficient file)");
  const QSet Q = q_set(c);
  const int r = resolve_r(c, Q.max());
  const auto f = perturbation_coefficients(c);
  const SphereGrid grid = cached_grid(c.n, c.resolution, grid_cache_dir());

  SearchOptions opts;
  opts.lambda_hi = c.lambda_hi;
  opts.lambda_min = c.lambda_min;
  opts.rel_tol = c.rel_tol;
  opts.convexity_trials = c.convexity_trials;
  opts.refine_q = c.refine_q;
  opts.certify = CertifyOptions{20, c.seed};
  const SearchResult res = search_lambda(f, Q, r, grid, c.M, opts);

  const NormSpec norm = NormSpec::perturbation(f, res.lambda_star);
  const double hilbert = hilbertian_check(norm, grid);

  if (c.format == "csv") {
    emit(c, certificates_csv(res.certificates, norm.label(), res.lambda_star));
  } else {
    json list = json::array();
    for (const auto& cert : res.certificates) list.push_back(certificate_entry(cert, norm, res.lambda_star));
    json report{{"config", config_to_json(c)},
                {"r_resolved", r},
                {"feasible", res.feasible},
                {"hilbertian", res.hilbertian},
                {"lambda_star", res.lambda_star},
                {"q_samples", res.q_samples},
                {"evaluations", res.evaluations},
                {"hilbertian_residual", hilbert},
                {"norm_spec", to_json(norm)},
                {"convexity", to_json(res.convexity)},
                {"certificates", list}};
    emit(c, report.dump(2) + "\n");
  }
  if (!res.feasible) return kExitRefuted;
  return exit_code_for(res.certificates);
}

int cmd_verify(const RunConfig& c) {
  json report{{"config", config_to_json(c)}};
  double residual = 0.0;
  double tolerance = c.tolerance;
  if (c.mode == "even-integer") {
    if (c.k < 1) throw ConfigError("--k must be >= 1");
    if (c.lambda < 0.0) throw ConfigError("--lambda must be >= 0 for the even-integer example");
    residual = even_integer_example(c.n, c.k, c.lambda, c.points, c.seed);
    tolerance = std::min(tolerance, 1e-8);
    report["identity_residual"] = residual;
  } else if (c.mode == "levy") {
    const NormSpec norm = make_norm(c);
    DensityResult density = [&] {
      if (!c.density.empty()) return load_density(c.density, c.q);
      const QSet Q = q_set(c);
      if (Q.samples().size() != 1) throw ConfigError("verify takes a single --q");
      const double q = Q.samples().front();
      const SphereGrid grid = cached_grid(c.n, c.resolution, grid_cache_dir());
      return density_for(norm, q, resolve_r(c, q), grid, c.M);
    }();
    if (density.coefficients.dimension() != c.n) throw ConfigError("density dimension differs from --n");
    const double q = c.q.empty() ? density.q : c.q.front();
    residual = levy_verify(norm, density.coefficients, q, c.points, c.seed);
    report["norm_spec"] = to_json(norm);
    report["q"] = q;
    report["density_q"] = density.q;
    report["reconstruction_error"] = residual;
  } else {
    throw ConfigError("unknown --mode '" + c.mode + "' (levy or even-integer)");
  }
  const bool pass = residual <= tolerance;
  report["tolerance"] = tolerance;
  report["pass"] = pass;
  report["seed"] = c.seed;
  emit(c, report.dump(2) + "\n");
  return pass ? kExitOk : kExitRefuted;
}

// Options shared by every subcommand; values land in `c` only when given on the
// command line, so they override the config file.
struct SharedOptions {
  std::string config;
  std::vector<CLI::Option*> overrides;
};

void add_shared(CLI::App* sub, RunConfig& flags, SharedOptions& shared) {
  sub->add_option("--config", shared.config, "JSON config file (a previous report also works)");
  auto& o = shared.overrides;
  o.push_back(sub->add_option("--n", flags.n, "ambient dimension"));
  o.push_back(sub->add_option("--q", flags.q, "exponent (repeatable)")->take_all());
  o.push_back(sub->add_option("--Q-range", flags.q_range, "equispaced exponents lo:hi:count"));
  o.push_back(sub->add_option("--f", flags.f, "euclidean | zonal-Y4 | zero | lp-ball:p | lq-power:k | coefficient CSV"));
  o.push_back(sub->add_option("--lambda", flags.lambda, "perturbation / power parameter"));
  o.push_back(sub->add_option("--M", flags.M, "density truncation degree (even)"));
  o.push_back(sub->add_option("--resolution", flags.resolution, "sphere grid resolution"));
  o.push_back(sub->add_option("--r", flags.r, "smoothness order or 'auto'"));
  o.push_back(sub->add_option("--seed", flags.seed, "random seed"));
  o.push_back(sub->add_option("--out", flags.out, "output file (stdout if omitted)"));
  o.push_back(sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"})));
  o.push_back(sub->add_option("--convexity-trials", flags.convexity_trials, "triangle-inequality samples"));
}

// Copies every option given on the command line from `flags` into `c`.
void apply_overrides(const RunConfig& flags, const SharedOptions& shared, RunConfig& c) {
  for (const CLI::Option* opt : shared.overrides) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--n") c.n = flags.n;
    else if (name == "--q") c.q = flags.q;
    else if (name == "--Q-range") c.q_range = flags.q_range;
    else if (name == "--f") c.f = flags.f;
    else if (name == "--lambda") c.lambda = flags.lambda;
    else if (name == "--M") c.M = flags.M;
    else if (name == "--resolution") c.resolution = flags.resolution;
    else if (name == "--r") c.r = flags.r;
    else if (name == "--seed") c.seed = flags.seed;
    else if (name == "--out") c.out = flags.out;
    else if (name == "--format") c.format = flags.format;
    else if (name == "--convexity-trials") c.convexity_trials = flags.convexity_trials;
    else if (name == "--lambda-hi") c.lambda_hi = flags.lambda_hi;
    else if (name == "--lambda-min") c.lambda_min = flags.lambda_min;
    else if (name == "--rel-tol") c.rel_tol = flags.rel_tol;
    else if (name == "--refine-q") c.refine_q = flags.refine_q;
    else if (name == "--mode") c.mode = flags.mode;
    else if (name == "--k") c.k = flags.k;
    else if (name == "--points") c.points = flags.points;
    else if (name == "--tolerance") c.tolerance = flags.tolerance;
    else if (name == "--density") c.density = flags.density;
    else if (name == "--density-out") c.density_out = flags.density_out;
  }
}

void validate(const RunConfig& c) {
  if (c.n < 2) throw ConfigError("--n must be >= 2");
  if (c.M < 0 || c.M % 2) throw ConfigError("--M must be a non-negative even integer");
  if (c.resolution < 4) throw ConfigError("--resolution must be >= 4");
  if (c.points < 1) throw ConfigError("--points must be >= 1");
  if (c.convexity_trials < 1) throw ConfigError("--convexity-trials must be >= 1");
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified embeddings of finite-dimensional normed spaces into L_q"};
  app.require_subcommand(1);

  RunConfig flags;
  SharedOptions shared;

  auto* table = app.add_subcommand("lambda-table", "closed-form vs quadrature eigenvalues of |t|^q");
  add_shared(table, flags, shared);

  auto* certify = app.add_subcommand("certify", "embedding certificates for one norm");
  add_shared(certify, flags, shared);
  shared.overrides.push_back(certify->add_option("--density-out", flags.density_out, "write the density JSON here"));
  bool search_flag = false;
  certify->add_flag("--search", search_flag, "run the λ-search instead (same as the search command)");

  auto* search = app.add_subcommand("search", "largest λ with every q in Q certified");
  add_shared(search, flags, shared);
  shared.overrides.push_back(search->add_option("--lambda-hi", flags.lambda_hi, "initial upper bound for λ"));
  shared.overrides.push_back(search->add_option("--lambda-min", flags.lambda_min, "give up below this λ"));
  shared.overrides.push_back(search->add_option("--rel-tol", flags.rel_tol, "bisection relative tolerance"));
  shared.overrides.push_back(search->add_flag("--refine-q", flags.refine_q, "refine Q where margins vary"));

  auto* verify = app.add_subcommand("verify", "Lévy representation and even-integer identity checks");
  add_shared(verify, flags, shared);
  shared.overrides.push_back(verify->add_option("--mode", flags.mode, "levy or even-integer"));
  shared.overrides.push_back(verify->add_option("--k", flags.k, "power for the even-integer example"));
  shared.overrides.push_back(verify->add_option("--points", flags.points, "random test points"));
  shared.overrides.push_back(verify->add_option("--tolerance", flags.tolerance, "pass threshold for the residual"));
  shared.overrides.push_back(verify->add_option("--density", flags.density, "density JSON (computed if omitted)"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig c;
    if (!shared.config.empty()) load_config_file(shared.config, c);
    apply_overrides(flags, shared, c);
    if (*table) c.command = "lambda-table";
    if (*certify) c.command = search_flag || c.search ? "search" : "certify";
    if (*search) c.command = "search";
    if (*verify) c.command = "verify";
    c.search = c.command == "search";
    if (c.format.empty()) c.format = c.command == "lambda-table" ? "csv" : "json";
    validate(c);

    if (c.command == "lambda-table") return cmd_lambda_table(c);
    if (c.command == "certify") return cmd_certify(c);
    if (c.command == "search") return cmd_search(c);
    return cmd_verify(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ExcludedExponent& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // hypothesis violations, unsupported dimensions, resolution errors
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
