#include "torusq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "torus/errors.hpp"
#include "torus/geometry.hpp"
#include "torus/operators.hpp"
#include "torus/oracle.hpp"
#include "torus/spectral.hpp"
#include "torus/thermo.hpp"
#include "torusq/manifest.hpp"
#include "torusq/table.hpp"

namespace torusq {
namespace {

constexpr double kHbar = 1.054571817e-34;  // J s

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Argument parsing helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) parts.push_back(current);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("not a number: '" + text + "'");
  return value;
}

int parse_int(const std::string& text) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("not an integer: '" + text + "'");
  return value;
}

// "1.5,2,3"
std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_double(part));
  if (values.empty()) throw UsageError("empty list");
  return values;
}

// "0:3" or "0,2,5"
std::vector<int> parse_int_set(const std::string& text) {
  std::vector<int> values;
  for (const auto& part : split(text, ',')) {
    const auto range = split(part, ':');
    if (range.size() == 1) {
      values.push_back(parse_int(range[0]));
    } else if (range.size() == 2) {
      const int lo = parse_int(range[0]);
      const int hi = parse_int(range[1]);
      if (hi < lo) throw UsageError("empty range '" + part + "'");
      for (int v = lo; v <= hi; ++v) values.push_back(v);
    } else {
      throw UsageError("malformed range '" + part + "'");
    }
  }
  if (values.empty()) throw UsageError("empty list");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

int decimals_of(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos || text.find_first_of("eE") != std::string::npos) return 0;
  return static_cast<int>(text.size() - dot - 1);
}

// "a=1.1:3:0.1", inclusive of the end point; values are rounded to the
// number of decimals written in the bounds and step.
std::vector<double> parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || text.substr(0, eq) != "a") {
    throw UsageError("grid must look like a=lo:hi:step");
  }
  const auto parts = split(text.substr(eq + 1), ':');
  if (parts.size() != 3) throw UsageError("grid must look like a=lo:hi:step");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const double step = parse_double(parts[2]);
  if (!(step > 0.0) || hi < lo) throw UsageError("grid needs step > 0 and hi >= lo");
  const int digits = std::max({decimals_of(parts[0]), decimals_of(parts[1]), decimals_of(parts[2])});
  const double scale = std::pow(10.0, digits);
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw UsageError("grid has too many points");
  std::vector<double> values;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    values.push_back(digits > 0 ? std::round(v * scale) / scale : v);
  }
  return values;
}

double as_double(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw std::logic_error("non-numeric cell");
}

// ---------------------------------------------------------------------------
// Output

struct OutputOptions {
  std::string out;
  std::string format;
  std::string timestamp;
  bool si = false;
  double radius = 0.0;
  double mass = 0.0;
};

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.out, "Output file; a <out>.manifest.json is written beside it")
      ->default_str("");
  sub->add_option("--format", o.format, "csv or json (default: from the --out extension)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_str("");
  sub->add_option("--timestamp", o.timestamp,
                  "Manifest timestamp: 'now' or a literal (default 1970-01-01T00:00:00Z)")
      ->default_str("");
  sub->add_flag("--si", o.si, "Convert E0 and T0 columns to SI units");
  sub->add_option("--R", o.radius, "Major radius in metres (with --si)");
  sub->add_option("--mass", o.mass, "Particle mass in kg (with --si)");
}

// E0 = hbar^2 a^2 / (2 m R^2) in J; T0 = hbar R / (10 m a) in m^3/s.
void convert_to_si(Table& table, double fixed_a, const OutputOptions& o) {
  if (!o.si) return;
  if (!(o.radius > 0.0) || !(o.mass > 0.0)) {
    throw torus::DomainError("--si requires --R > 0 and --mass > 0");
  }
  const auto a_it = std::find(table.columns.begin(), table.columns.end(), "a");
  const std::optional<std::size_t> a_col =
      a_it == table.columns.end() ? std::nullopt
                                  : std::optional<std::size_t>(a_it - table.columns.begin());
  enum class Scale { None, Energy, Dipole };
  std::vector<Scale> scales(table.columns.size(), Scale::None);
  auto ends_with = [](const std::string& s, std::string_view tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
  };
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    auto& name = table.columns[i];
    if (ends_with(name, "_E0")) {
      scales[i] = Scale::Energy;
      name = name.substr(0, name.size() - 3) + "_J";
    } else if (ends_with(name, "_T0")) {
      scales[i] = Scale::Dipole;
      name = name.substr(0, name.size() - 3) + "_m3_per_s";
    }
  }
  for (auto& row : table.rows) {
    const double a = a_col ? as_double(row[*a_col]) : fixed_a;
    torus::require_aspect_ratio(a);
    const double e0 = kHbar * kHbar * a * a / (2.0 * o.mass * o.radius * o.radius);
    const double t0 = kHbar * o.radius / (10.0 * o.mass * a);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (scales[i] == Scale::None) continue;
      if (std::holds_alternative<std::string>(row[i])) continue;
      row[i] = as_double(row[i]) * (scales[i] == Scale::Energy ? e0 : t0);
    }
  }
}

std::string option_value(const CLI::Option* opt) {
  if (opt->get_expected_max() == 0) return opt->count() > 0 ? "true" : "false";
  if (opt->count() == 0) return opt->get_default_str();
  std::string joined;
  for (const auto& r : opt->results()) {
    if (!joined.empty()) joined += ',';
    joined += r;
  }
  return joined;
}

std::map<std::string, std::string> collect_parameters(const CLI::App& sub) {
  std::map<std::string, std::string> params;
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_name();
    name.erase(0, name.find_first_not_of('-'));
    if (name == "help" || name == "out" || name == "timestamp" || name.empty()) continue;
    params[name] = option_value(opt);
  }
  return params;
}

void emit(Table& table, const CLI::App& sub, const OutputOptions& o, std::ostream& out) {
  table.sort_rows();
  Format format = Format::Csv;
  if (!o.format.empty()) {
    format = o.format == "json" ? Format::Json : Format::Csv;
  } else if (!o.out.empty()) {
    format = format_for_path(o.out);
  }
  std::ostringstream buffer;
  write_table(table, format, buffer);
  const std::string bytes = buffer.str();
  if (o.out.empty()) {
    out << bytes;
    return;
  }

  const std::filesystem::path path(o.out);
  {
    std::ofstream file(path, std::ios::binary);
    file << bytes;
    file.close();
    if (!file) throw std::runtime_error("cannot write " + path.string());
  }
  RunManifest manifest;
  manifest.command = sub.get_name();
  manifest.parameters = collect_parameters(sub);
  if (o.timestamp == "now") {
    manifest.timestamp = utc_now();
  } else if (!o.timestamp.empty()) {
    manifest.timestamp = o.timestamp;
  }
  manifest.checksums[path.filename().string()] = sha256_hex(bytes);
  write_manifest(manifest, path);
}

// ---------------------------------------------------------------------------
// Subcommands

struct SpectrumArgs {
  std::string op = "hamiltonian";
  double a = 0.0;
  int m = 0;
  int truncation = 250;
  int levels = 10;
  bool coefficients = false;
  double cut = 0.05;
};

Table spectrum_table(const SpectrumArgs& s) {
  const bool toroidal = s.op == "toroidal";
  const auto kind = toroidal ? torus::OperatorKind::ToroidalDipole : torus::OperatorKind::Hamiltonian;
  const auto block = torus::assemble_block(kind, s.truncation, s.m, s.a);
  // T3 anticommutes with parity, so only the Hamiltonian has a parity-adapted path.
  const auto spectrum = toroidal ? torus::eigh(block) : torus::parity_adapted_eigh(block);
  const std::string value_column = toroidal ? "t3_T0" : "energy_E0";
  if (s.levels < 0 || static_cast<std::size_t>(s.levels) > spectrum.dimension()) {
    throw torus::DomainError("--levels must lie in [0, 2N+1]");
  }
  const std::size_t count = s.levels == 0 ? spectrum.dimension() : static_cast<std::size_t>(s.levels);
  Table table;
  if (!s.coefficients) {
    table.columns = {"h", value_column};
    for (std::size_t h = 0; h < count; ++h) {
      table.add_row({static_cast<std::int64_t>(h), spectrum.eigenvalues[h]});
    }
    return table;
  }
  // Expansion coefficients C_n of each level with |C_n| > cut.
  table.columns = {"h", "n", value_column, "coefficient"};
  table.key_columns = 2;
  for (std::size_t h = 0; h < count; ++h) {
    const auto c = torus::coefficients(spectrum, h);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (std::abs(c[i]) <= s.cut) continue;
      table.add_row({static_cast<std::int64_t>(h), static_cast<std::int64_t>(block.n_of(i)),
                     spectrum.eigenvalues[h], c[i]});
    }
  }
  return table;
}

struct ExpectArgs {
  std::string a;
  std::string m = "0";
  int truncation = 250;
  int levels = 100;
  bool crossover = false;
  double threshold = torus::kDefaultCrossoverThreshold;
};

Table expect_table(const ExpectArgs& s) {
  const auto as = parse_double_list(s.a);
  const auto ms = parse_int_set(s.m);
  Table table;
  if (s.crossover) {
    table.columns = {"a", "m", "threshold_T0", "crossover_h"};
    table.key_columns = 2;
  } else {
    table.columns = {"a", "m", "h", "energy_E0", "t3_T0"};
    table.key_columns = 3;
  }
  for (double a : as) {
    for (int m : ms) {
      const auto levels = torus::analyze_levels(a, m, s.truncation);
      if (s.crossover) {
        const auto h = torus::crossover_level(levels.t3(), s.threshold);
        table.add_row({a, static_cast<std::int64_t>(m), s.threshold,
                       h ? Cell(static_cast<std::int64_t>(*h)) : Cell(std::string("none"))});
        continue;
      }
      if (s.levels < 0 || static_cast<std::size_t>(s.levels) > levels.dimension()) {
        throw torus::DomainError("--levels must lie in [0, 2N+1]");
      }
      const std::size_t count =
          s.levels == 0 ? levels.dimension() : static_cast<std::size_t>(s.levels);
      for (std::size_t h = 0; h < count; ++h) {
        table.add_row({a, static_cast<std::int64_t>(m), static_cast<std::int64_t>(h),
                       levels.resolved.states.eigenvalues[h], levels.t3()[h]});
      }
    }
  }
  return table;
}

struct ThermoArgs {
  std::string stats = "fermi";
  double beta = 0.0;
  double a = 0.0;
  double mu = 0.0;
  double target = 0.0;
  int cutoff_n = 0;
  int cutoff_m = 0;
  int fill = 0;
  int fill_m = 3;
  int truncation = 250;
  const CLI::Option* mu_opt = nullptr;
  const CLI::Option* target_opt = nullptr;
  const CLI::Option* fill_opt = nullptr;
};

Table thermo_table(const ThermoArgs& s) {
  Table table;
  if (s.fill_opt->count() > 0) {
    if (s.fill < 1) throw torus::DomainError("--fill must be >= 1");
    const auto curve =
        torus::fermi_fill_curve(static_cast<std::size_t>(s.fill), s.a, s.fill_m, s.truncation);
    const auto levels =
        torus::fermi_levels(s.a, s.fill_m, s.truncation, static_cast<std::size_t>(s.fill));
    table.columns = {"particles",   "total_energy_E0", "total_t3_T0",
                     "added_t3_T0", "added_m",         "added_h"};
    for (std::size_t i = 0; i < curve.size(); ++i) {
      table.add_row({static_cast<std::int64_t>(curve[i].particles), curve[i].total_energy,
                     curve[i].total_t3, curve[i].added_t3, static_cast<std::int64_t>(levels[i].m),
                     static_cast<std::int64_t>(levels[i].h)});
    }
    return table;
  }

  const bool has_mu = s.mu_opt->count() > 0;
  const bool has_target = s.target_opt->count() > 0;
  if (has_mu == has_target) throw UsageError("thermo needs exactly one of --mu, --target-n or --fill");
  const auto stats = s.stats == "bose" ? torus::Statistics::Bose : torus::Statistics::Fermi;

  double mu = s.mu;
  if (has_target) {
    mu = torus::solve_chemical_potential(stats, s.beta, s.target, s.a, s.cutoff_n, s.cutoff_m).mu;
  }
  torus::ThermoState state{stats, s.beta, mu, s.cutoff_n, s.cutoff_m};
  torus::validate(state, s.a);
  if (s.cutoff_n == 0 && s.cutoff_m == 0) {
    std::tie(state.cutoff_n, state.cutoff_m) = torus::default_cutoffs(s.beta, mu, s.a);
  }
  const auto log_z = torus::grand_potential_log(state, s.a);
  table.columns = {"stats",    "a",        "beta_per_E0",    "mu_E0",     "cutoff_n", "cutoff_m",
                   "ln_z",     "ln_z_tail", "converged",     "mean_n",    "ln_z_continuum"};
  table.add_row({s.stats, s.a, s.beta, mu, static_cast<std::int64_t>(state.cutoff_n),
                 static_cast<std::int64_t>(state.cutoff_m), log_z.value, log_z.tail,
                 log_z.converged, torus::mean_particle_number(state, s.a),
                 torus::continuum_log_z(stats, s.beta, mu, s.a)});
  return table;
}

struct NatArgs {
  std::string k;
  std::string rho;
  std::string z;
};

Table natcoords_table(const NatArgs& s) {
  if (s.k.empty() == s.rho.empty()) throw UsageError("natcoords needs exactly one of --k or --rho");
  const auto zs = parse_double_list(s.z);
  Table table;
  table.key_columns = 2;
  if (!s.k.empty()) {
    table.columns = {"k", "z", "u_10mp", "half_width_10mp"};
    for (double k : parse_double_list(s.k)) {
      for (double z : zs) table.add_row({k, z, torus::natural_u(k, z), torus::half_width_a(k)});
    }
  } else {
    table.columns = {"rho", "z", "k", "u_10mp", "half_width_10mp"};
    for (double rho : parse_double_list(s.rho)) {
      for (double z : zs) {
        const auto nc = torus::natural_coords(rho, z);
        table.add_row({rho, z, nc.k, nc.u, torus::half_width_a(nc.k)});
      }
    }
  }
  return table;
}

struct VerifyArgs {
  std::string suite = "all";
  std::string a;
  int nmax = 5;
  int n_small = 250;
  int n_large = 1000;
  int levels = 100;
};

void verify_oracle(const VerifyArgs& s, Table& table) {
  const auto as = s.a.empty() ? std::vector<double>{1.5, 2.0, 3.0} : parse_double_list(s.a);
  if (s.nmax < 0) throw torus::DomainError("--nmax must be >= 0");
  for (double a : as) {
    for (auto kind : {torus::OperatorKind::Hamiltonian, torus::OperatorKind::ToroidalDipole}) {
      double worst = 0.0;
      for (int m = 0; m <= 3; ++m) {
        for (int n1 = -s.nmax; n1 <= s.nmax; ++n1) {
          for (int n2 = -s.nmax; n2 <= s.nmax; ++n2) {
            const double closed = kind == torus::OperatorKind::Hamiltonian
                                      ? torus::hamiltonian_element(n1, n2, m, a)
                                      : torus::toroidal_element(n1, n2, a);
            const double quad = torus::oracle::quad_element(kind, n1, n2, m, a);
            worst = std::max(worst, std::abs(quad - closed) / std::max(1.0, std::abs(closed)));
          }
        }
      }
      table.add_row({std::string("oracle"), std::string(torus::to_string(kind)), a, worst, 1e-8,
                     worst <= 1e-8});
    }
  }
}

void verify_identity(const VerifyArgs& s, Table& table) {
  const auto as =
      s.a.empty() ? std::vector<double>{1.1, 1.5, 2.0, 3.0, 10.0} : parse_double_list(s.a);
  constexpr int kSamples = 1000;
  for (double a : as) {
    torus::require_aspect_ratio(a);
    double sum = 0.0;
    double poly = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / kSamples;
      const double scale = std::max(1.0, std::abs(torus::oracle::divergence_terms(a, theta).tl));
      sum = std::max(sum, torus::oracle::tl_tq_residual(a, theta) / scale);
      poly = std::max(poly, torus::oracle::check_t3_consistency(a, theta) / scale);
    }
    table.add_row({std::string("identity"), std::string("tl_plus_tq"), a, sum, 1e-12, sum <= 1e-12});
    table.add_row(
        {std::string("identity"), std::string("tl_polynomial"), a, poly, 1e-12, poly <= 1e-12});
  }
}

void verify_natcoords(Table& table) {
  const double c = torus::half_width_a(1.0);
  const double rounded = std::abs(c - 1.31103);
  const double quad = std::abs(torus::oracle::quad_half_width(1.0) - c);
  const double limit = std::abs(torus::natural_u(1.0, 1e6) + c);
  const Cell none = std::string();
  table.add_row({std::string("natcoords"), std::string("half_width_constant"), none, rounded, 1e-5,
                 rounded <= 1e-5});
  table.add_row({std::string("natcoords"), std::string("half_width_quadrature"), none, quad, 1e-8,
                 quad <= 1e-8});
  table.add_row({std::string("natcoords"), std::string("u_limit"), none, limit, 1e-4,
                 limit <= 1e-4});
}

void verify_convergence(const VerifyArgs& s, Table& table) {
  const auto as = s.a.empty() ? std::vector<double>{2.0} : parse_double_list(s.a);
  for (double a : as) {
    for (int m = 0; m <= 3; ++m) {
      const double delta = torus::convergence_delta(torus::OperatorKind::Hamiltonian, m, a,
                                                    s.n_small, s.n_large,
                                                    static_cast<std::size_t>(s.levels));
      table.add_row({std::string("convergence"), "hamiltonian m=" + std::to_string(m), a, delta,
                     1e-5, delta <= 1e-5});
    }
  }
}

Table verify_table(const VerifyArgs& s) {
  Table table;
  table.columns = {"suite", "check", "a", "value", "tolerance", "passed"};
  table.key_columns = 3;
  const bool all = s.suite == "all";
  if (all || s.suite == "oracle") verify_oracle(s, table);
  if (all || s.suite == "identity") verify_identity(s, table);
  if (all || s.suite == "natcoords") verify_natcoords(table);
  if (all || s.suite == "convergence") verify_convergence(s, table);
  return table;
}

bool all_passed(const Table& table) {
  const auto col = static_cast<std::size_t>(
      std::find(table.columns.begin(), table.columns.end(), "passed") - table.columns.begin());
  return std::all_of(table.rows.begin(), table.rows.end(),
                     [col](const auto& row) { return std::get<bool>(row[col]); });
}

struct SweepArgs {
  std::string grid;
  std::string m = "0";
  int levels = 5;
  int truncation = 250;
  bool t3 = false;
  int jobs = 1;
};

Table sweep_table(const SweepArgs& s) {
  const auto as = parse_grid(s.grid);
  const auto ms = parse_int_set(s.m);
  if (s.levels < 1) throw torus::DomainError("--levels must be >= 1");
  if (s.jobs < 1) throw UsageError("--jobs must be >= 1");

  struct Item {
    double a;
    int m;
    std::vector<double> energies;
    std::vector<double> t3;
  };
  std::vector<Item> items;
  for (double a : as)
    for (int m : ms) items.push_back({a, m, {}, {}});

  const auto levels = static_cast<std::size_t>(s.levels);
  auto work = [&](Item& item) {
    if (s.t3) {
      const auto table = torus::analyze_levels(item.a, item.m, s.truncation);
      if (levels > table.dimension()) throw torus::DomainError("--levels exceeds 2N+1");
      item.energies.assign(table.resolved.states.eigenvalues.begin(),
                           table.resolved.states.eigenvalues.begin() + levels);
      item.t3.assign(table.t3().begin(), table.t3().begin() + levels);
    } else {
      const auto block = torus::assemble_block(torus::OperatorKind::Hamiltonian, s.truncation,
                                               item.m, item.a);
      const auto values = torus::eigvalsh(block.values());
      if (levels > values.size()) throw torus::DomainError("--levels exceeds 2N+1");
      item.energies.assign(values.begin(), values.begin() + levels);
    }
  };

  // Workers pull items by index; results land in their own slots, so the
  // emitted order does not depend on scheduling.
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        work(items[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(s.jobs), items.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Table table;
  table.columns = {"a", "m", "level", "energy_E0"};
  if (s.t3) table.columns.push_back("t3_T0");
  table.key_columns = 3;
  for (const auto& item : items) {
    for (std::size_t h = 0; h < item.energies.size(); ++h) {
      std::vector<Cell> row{item.a, static_cast<std::int64_t>(item.m), static_cast<std::int64_t>(h),
                            item.energies[h]};
      if (s.t3) row.emplace_back(item.t3[h]);
      table.add_row(std::move(row));
    }
  }
  return table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, toroidal dipole and thermodynamics of a particle on a torus", "torusq"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  OutputOptions spectrum_out, expect_out, thermo_out, nat_out, verify_out, sweep_out;

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of H (E0) or T3 (T0) in one m sector");
  spectrum->add_option("--operator", spectrum_args.op, "hamiltonian or toroidal")
      ->check(CLI::IsMember({"hamiltonian", "toroidal"}));
  spectrum->add_option("--a", spectrum_args.a, "Aspect ratio R/r")->required();
  spectrum->add_option("--m", spectrum_args.m, "Angular quantum number");
  spectrum->add_option("--N", spectrum_args.truncation, "Truncation, n in [-N, N]");
  spectrum->add_option("--levels", spectrum_args.levels, "Number of levels (0 = all)");
  spectrum->add_flag("--coefficients", spectrum_args.coefficients,
                     "Emit expansion coefficients instead of energies");
  spectrum->add_option("--cut", spectrum_args.cut, "Smallest |C_n| listed with --coefficients");
  add_output_options(spectrum, spectrum_out);

  ExpectArgs expect_args;
  auto* expect = app.add_subcommand("expect", "Toroidal dipole expectation values (T0)");
  expect->add_option("--a", expect_args.a, "Aspect ratios, comma separated")->required();
  expect->add_option("--m", expect_args.m, "m values: list or range lo:hi");
  expect->add_option("--N", expect_args.truncation, "Truncation, n in [-N, N]");
  expect->add_option("--levels", expect_args.levels, "Levels per sector (0 = all)");
  expect->add_flag("--crossover", expect_args.crossover, "Emit crossover levels only");
  expect->add_option("--threshold", expect_args.threshold, "Crossover threshold in T0");
  add_output_options(expect, expect_out);

  ThermoArgs thermo_args;
  auto* thermo = app.add_subcommand("thermo", "Grand-canonical ideal gas and Fermi filling");
  thermo->add_option("--stats", thermo_args.stats, "bose or fermi")
      ->check(CLI::IsMember({"bose", "fermi"}));
  thermo->add_option("--beta", thermo_args.beta, "Inverse temperature in 1/E0");
  thermo->add_option("--a", thermo_args.a, "Aspect ratio R/r")->required();
  thermo_args.mu_opt = thermo->add_option("--mu", thermo_args.mu, "Chemical potential in E0");
  thermo_args.target_opt =
      thermo->add_option("--target-n", thermo_args.target, "Solve mu for this particle number");
  thermo->add_option("--cutoff-n", thermo_args.cutoff_n, "Bound on |n| (0 with --cutoff-m 0 = auto)");
  thermo->add_option("--cutoff-m", thermo_args.cutoff_m, "Bound on |m| (0 with --cutoff-n 0 = auto)");
  thermo_args.fill_opt =
      thermo->add_option("--fill", thermo_args.fill, "Zero-temperature Fermi filling up to N particles");
  thermo->add_option("--fill-m", thermo_args.fill_m, "Bound on |m| for --fill");
  thermo->add_option("--N", thermo_args.truncation, "Truncation for --fill spectra");
  add_output_options(thermo, thermo_out);

  NatArgs nat_args;
  auto* nat = app.add_subcommand("natcoords", "Natural coordinates (k, u)");
  nat->add_option("--k", nat_args.k, "k values, comma separated");
  nat->add_option("--rho", nat_args.rho, "rho values (units of R), comma separated");
  nat->add_option("--z", nat_args.z, "z values (units of R), comma separated")->required();
  add_output_options(nat, nat_out);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run a verification suite; exit 3 if a check fails");
  verify->add_option("--suite", verify_args.suite, "oracle, identity, natcoords, convergence or all")
      ->check(CLI::IsMember({"oracle", "identity", "natcoords", "convergence", "all"}));
  verify->add_option("--a", verify_args.a, "Aspect ratios (default depends on the suite)")
      ->default_str("");
  verify->add_option("--nmax", verify_args.nmax, "Largest |n| in the oracle suite");
  verify->add_option("--n-small", verify_args.n_small, "Smaller truncation for convergence");
  verify->add_option("--n-large", verify_args.n_large, "Larger truncation for convergence");
  verify->add_option("--levels", verify_args.levels, "Levels compared for convergence");
  add_output_options(verify, verify_out);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Lowest levels over a grid of aspect ratios");
  sweep->add_option("--grid", sweep_args.grid, "a=lo:hi:step")->required();
  sweep->add_option("--m", sweep_args.m, "m values: list or range lo:hi");
  sweep->add_option("--levels", sweep_args.levels, "Levels per grid point");
  sweep->add_option("--N", sweep_args.truncation, "Truncation, n in [-N, N]");
  sweep->add_flag("--t3", sweep_args.t3, "Also emit toroidal dipole expectation values");
  sweep->add_option("--jobs", sweep_args.jobs, "Worker threads");
  add_output_options(sweep, sweep_out);

  std::vector<const char*> argv{"torusq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "torusq: " << e.what() << "\n\n";
    const CLI::App* context = &app;
    for (const auto* sub : app.get_subcommands()) context = sub;
    err << context->help();
    return kExitUsage;
  }

  try {
    Table table;
    if (spectrum->parsed()) {
      table = spectrum_table(spectrum_args);
      convert_to_si(table, spectrum_args.a, spectrum_out);
      emit(table, *spectrum, spectrum_out, out);
    } else if (expect->parsed()) {
      table = expect_table(expect_args);
      convert_to_si(table, 0.0, expect_out);
      emit(table, *expect, expect_out, out);
    } else if (thermo->parsed()) {
      table = thermo_table(thermo_args);
      convert_to_si(table, thermo_args.a, thermo_out);
      emit(table, *thermo, thermo_out, out);
    } else if (nat->parsed()) {
      table = natcoords_table(nat_args);
      emit(table, *nat, nat_out, out);
    } else if (verify->parsed()) {
      table = verify_table(verify_args);
      emit(table, *verify, verify_out, out);
      if (!all_passed(table)) {
        err << "torusq: verification failed\n";
        return kExitNumeric;
      }
    } else if (sweep->parsed()) {
      table = sweep_table(sweep_args);
      convert_to_si(table, 0.0, sweep_out);
      emit(table, *sweep, sweep_out, out);
    }
  } catch (const UsageError& e) {
    err << "torusq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const torus::NumericError& e) {
    err << "torusq: numeric error: " << e.what() << " (achieved error " << e.achieved_error()
        << ")\n";
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    // DomainError, out_of_range and invalid_argument all land here.
    err << "torusq: domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "torusq: error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace torusq
