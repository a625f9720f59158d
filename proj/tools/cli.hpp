#pragma once

// Subcommand-style front end: decompose | verify | density | converge-local |
// converge-global | sample | plot-data.
//
// Exit codes: 0 success, 2 usage, 3 verification failure, 4 numeric or budget failure.
// OUTPUT_DIR, when set, is the directory for reports that are not sent to stdout.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include <bspin/asymptotics.hpp>
#include <bspin/convergence.hpp>
#include <bspin/exact.hpp>
#include <bspin/lattice.hpp>
#include <bspin/oracle.hpp>

#include "report.hpp"

namespace bspin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitNumeric = 4;

enum class Verb { decompose, verify, density, converge_local, converge_global, sample, plot_data };
enum class Format { csv, json };

enum class ErrorKind { unknown_verb, unknown_flag, missing_flag, malformed_number, invalid_value, parity_impossible };

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::unknown_verb: return "unknown_verb";
    case ErrorKind::unknown_flag: return "unknown_flag";
    case ErrorKind::missing_flag: return "missing_flag";
    case ErrorKind::malformed_number: return "malformed_number";
    case ErrorKind::invalid_value: return "invalid_value";
    case ErrorKind::parity_impossible: return "parity_impossible";
  }
  return "usage";
}

class UsageError : public std::runtime_error {
 public:
  UsageError(ErrorKind kind, std::string flag, const std::string& what)
      : std::runtime_error(flag.empty() ? what : flag + ": " + what), kind_(kind), flag_(std::move(flag)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& flag() const noexcept { return flag_; }

 private:
  ErrorKind kind_;
  std::string flag_;
};

struct VerbName {
  Verb verb;
  std::string_view name;
};

inline constexpr VerbName kVerbs[] = {
    {Verb::decompose, "decompose"},         {Verb::verify, "verify"},
    {Verb::density, "density"},             {Verb::converge_local, "converge-local"},
    {Verb::converge_global, "converge-global"}, {Verb::sample, "sample"},
    {Verb::plot_data, "plot-data"},
};

inline std::string_view verb_name(Verb v) {
  for (const auto& e : kVerbs)
    if (e.verb == v) return e.name;
  return "?";
}

/// Test-harness hook: shifts the closed-form multiplicity at one point before `verify` checks it.
struct FaultInjection {
  std::vector<int> a;
  int delta = 1;
};

struct Command {
  Verb verb = Verb::decompose;
  int rank = 1;
  int power = 0;
  bool has_power = false;
  std::vector<int> powers;
  double cutoff = 2.0;
  std::optional<Orthotope> box;
  std::vector<double> x;
  std::vector<int> point;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  int nodes = 0;
  double tol = 1e-10;
  Format format = Format::csv;
  std::string output;
  std::string command_line;
  std::optional<FaultInjection> fault;
};

namespace detail {

template <class T>
T parse_number(const std::string& flag, std::string_view text) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw UsageError(ErrorKind::malformed_number, flag, "cannot parse '" + std::string(text) + "' as a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw UsageError(ErrorKind::invalid_value, flag, "value must be finite");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& flag, std::string_view text) {
  std::vector<T> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<T>(flag, part));
  return out;
}

/// "c1:d1,c2:d2,..." with c_i < d_i.
inline Orthotope parse_box(std::string_view text, int rank) {
  std::vector<double> lo, hi;
  for (auto axis : split(text, ',')) {
    const auto colon = axis.find(':');
    if (colon == std::string_view::npos) {
      throw UsageError(ErrorKind::malformed_number, "--box", "expected c:d per axis, got '" + std::string(axis) + "'");
    }
    lo.push_back(parse_number<double>("--box", axis.substr(0, colon)));
    hi.push_back(parse_number<double>("--box", axis.substr(colon + 1)));
    if (!(lo.back() < hi.back())) throw UsageError(ErrorKind::invalid_value, "--box", "each axis needs c < d");
  }
  if (static_cast<int>(lo.size()) != rank) {
    throw UsageError(ErrorKind::invalid_value, "--box", "box has " + std::to_string(lo.size()) + " axes, rank is " + std::to_string(rank));
  }
  return Orthotope(std::move(lo), std::move(hi));
}

inline std::string join_command_line(const std::vector<std::string>& args) {
  std::string s = report::kToolName;
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

}  // namespace detail

/// Parses arguments (without the program name) into a validated Command.
inline Command parse_args(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError(ErrorKind::unknown_verb, "", "a verb is required");
  std::optional<Verb> verb;
  for (const auto& e : kVerbs)
    if (args.front() == e.name) verb = e.verb;
  if (!verb) throw UsageError(ErrorKind::unknown_verb, args.front(), "unknown verb");

  CLI::App app{"bspin"};
  app.allow_extras(false);
  std::string rank, power, powers, cutoff, box, x, point, count, seed, nodes, tol, format, output;
  app.add_option("--rank", rank);
  app.add_option("--power", power);
  app.add_option("--powers", powers);
  app.add_option("--cutoff", cutoff);
  app.add_option("--box", box);
  app.add_option("--x", x);
  app.add_option("--point", point);
  app.add_option("--count", count);
  app.add_option("--seed", seed);
  app.add_option("--nodes", nodes);
  app.add_option("--tol", tol);
  app.add_option("--format", format);
  app.add_option("--output", output);

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ExtrasError& e) {
    throw UsageError(ErrorKind::unknown_flag, "", e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(ErrorKind::invalid_value, "", e.what());
  }

  Command cmd;
  cmd.verb = *verb;
  cmd.command_line = detail::join_command_line(args);

  auto require = [](const std::string& flag, const std::string& v) {
    if (v.empty()) throw UsageError(ErrorKind::missing_flag, flag, "required for this verb");
  };
  require("--rank", rank);
  cmd.rank = detail::parse_number<int>("--rank", rank);
  if (cmd.rank < 1) throw UsageError(ErrorKind::invalid_value, "--rank", "must be >= 1");

  if (!power.empty()) {
    cmd.power = detail::parse_number<int>("--power", power);
    cmd.has_power = true;
    if (cmd.power < 0) throw UsageError(ErrorKind::invalid_value, "--power", "must be >= 0");
  }
  if (!powers.empty()) {
    cmd.powers = detail::parse_list<int>("--powers", powers);
    for (int p : cmd.powers)
      if (p < 1) throw UsageError(ErrorKind::invalid_value, "--powers", "every power must be >= 1");
  }
  if (!cutoff.empty()) {
    cmd.cutoff = detail::parse_number<double>("--cutoff", cutoff);
    if (!(cmd.cutoff > 0)) throw UsageError(ErrorKind::invalid_value, "--cutoff", "must be > 0");
  }
  if (!box.empty()) cmd.box = detail::parse_box(box, cmd.rank);
  if (!x.empty()) {
    cmd.x = detail::parse_list<double>("--x", x);
    if (static_cast<int>(cmd.x.size()) != cmd.rank) throw UsageError(ErrorKind::invalid_value, "--x", "needs one value per rank");
  }
  if (!point.empty()) {
    cmd.point = detail::parse_list<int>("--point", point);
    if (static_cast<int>(cmd.point.size()) != cmd.rank) throw UsageError(ErrorKind::invalid_value, "--point", "needs one value per rank");
  }
  if (!count.empty()) {
    const auto c = detail::parse_number<long long>("--count", count);
    if (c < 0) throw UsageError(ErrorKind::invalid_value, "--count", "must be >= 0");
    cmd.count = static_cast<std::size_t>(c);
  }
  if (!seed.empty()) cmd.seed = detail::parse_number<std::uint64_t>("--seed", seed);
  if (!nodes.empty()) {
    cmd.nodes = detail::parse_number<int>("--nodes", nodes);
    if (cmd.nodes < 1) throw UsageError(ErrorKind::invalid_value, "--nodes", "must be >= 1");
  }
  if (!tol.empty()) {
    cmd.tol = detail::parse_number<double>("--tol", tol);
    if (!(cmd.tol > 0)) throw UsageError(ErrorKind::invalid_value, "--tol", "must be > 0");
  }
  if (!format.empty()) {
    if (format == "csv") cmd.format = Format::csv;
    else if (format == "json") cmd.format = Format::json;
    else throw UsageError(ErrorKind::invalid_value, "--format", "expected csv or json");
  }
  cmd.output = output;

  switch (cmd.verb) {
    case Verb::decompose:
    case Verb::verify:
    case Verb::plot_data:
      require("--power", power);
      break;
    case Verb::sample:
      require("--power", power);
      require("--count", count);
      break;
    case Verb::converge_local:
      require("--powers", powers);
      break;
    case Verb::converge_global:
      require("--powers", powers);
      require("--box", box);
      break;
    case Verb::density:
      if (x.empty() && point.empty()) throw UsageError(ErrorKind::missing_flag, "--x", "density needs --x or --point");
      if (!point.empty()) {
        require("--power", power);
        if (!has_power_parity(cmd.point, cmd.power)) {
          throw UsageError(ErrorKind::parity_impossible, "--point",
                           "coordinates must all be " + std::string(support_parity(cmd.power) ? "odd" : "even") +
                               " for power " + std::to_string(cmd.power));
        }
        if (!is_dominant_regular(cmd.point)) {
          throw UsageError(ErrorKind::invalid_value, "--point", "must be strictly decreasing and positive");
        }
      }
      break;
  }
  return cmd;
}

namespace detail {

inline void add_index_columns(report::Table& t, const std::string& prefix, int rank) {
  for (int i = 1; i <= rank; ++i) t.columns.push_back(prefix + std::to_string(i));
}

inline void push_ints(std::vector<report::Cell>& row, std::span<const int> v) {
  for (int a : v) row.emplace_back(static_cast<long long>(a));
}

inline void push_doubles(std::vector<report::Cell>& row, std::span<const double> v) {
  for (double a : v) row.emplace_back(a);
}

inline double scaled_pmf(const Rational& p, int rank, int power) {
  return to_double(p) * std::pow(std::sqrt(static_cast<double>(power)) / 2, rank);
}

inline report::Table decompose_table(Rank n, int power) {
  report::Table t;
  add_index_columns(t, "a_", n.value());
  add_index_columns(t, "m_", n.value());
  for (const char* c : {"multiplicity", "dimension", "probability", "probability_float"}) t.columns.emplace_back(c);
  const auto table = decomposition_table(n, power);
  for (const auto& r : table.rows) {
    std::vector<report::Cell> row;
    push_ints(row, r.a.coords());
    push_ints(row, weight_from_a(n, r.a).labels());
    row.emplace_back(r.multiplicity);
    row.emplace_back(r.dimension);
    row.emplace_back(r.probability);
    row.emplace_back(to_double(r.probability));
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct VerifyOutcome {
  report::Table table;
  bool pass = true;
};

inline VerifyOutcome verify_table(const Command& cmd) {
  const Rank n(cmd.rank);
  const int power = cmd.power;
  require_table_size(n, power);
  VerifyOutcome out;
  out.table.columns = {"check", "status", "detail"};
  // only sum rules and oracle equivalence decide the exit status; other rows are informational
  auto add = [&](const std::string& check, bool ok, const std::string& detail, bool gating, bool skipped = false) {
    out.table.rows.push_back({check, std::string(skipped ? "skip" : ok ? "pass" : "fail"), detail});
    if (gating && !skipped && !ok) out.pass = false;
  };

  const ClosedFormMultiplicity closed_form(n, power);
  auto closed = [&](std::span<const int> a) -> BigInt {
    BigInt m = closed_form(a);
    if (cmd.fault && std::equal(a.begin(), a.end(), cmd.fault->a.begin(), cmd.fault->a.end())) m += cmd.fault->delta;
    return m;
  };

  const BigInt total = total_dimension(n, power);
  BigInt dim_sum = 0;
  Rational prob_sum = 0;
  bool dims_agree = true;
  std::string dim_detail = "all support points";
  for_each_support_point(n, power, [&](std::span<const int> a) {
    const BigInt d = dim_irrep(n, a);
    if (dims_agree && d != dim_irrep_weyl(n, a)) {
      dims_agree = false;
      dim_detail = "paths differ at " + APoint(std::vector<int>(a.begin(), a.end())).to_string();
    }
    const BigInt m = closed(a);
    dim_sum += m * d;
    prob_sum += Rational(m * d, total);
  });
  add("sum_rule_dimension", dim_sum == total, "sum mult*dim = " + dim_sum.str() + ", expected " + total.str(), true);
  add("sum_rule_probability", prob_sum == 1, "sum pmf = " + bspin::to_string(prob_sum), true);
  add("dimension_paths", dims_agree, dim_detail, false);

  const auto eq = check_equivalence(n, power, closed);
  std::string eq_detail = std::to_string(eq.points_checked) + " points";
  if (eq.first_divergence) {
    const auto& d = *eq.first_divergence;
    std::ostringstream os;
    os << "first divergence at " << APoint(d.a).to_string() << ": closed " << d.closed << ", reflected "
       << d.reflected << ", recurrence " << d.recurrence;
    eq_detail = os.str();
  }
  add("oracle_equivalence", eq.pass, eq_detail, true);

  HermiteOptions opt;
  opt.nodes_per_axis = cmd.nodes;
  if (n.value() <= opt.max_rank) {
    const double norm = chamber_norm(n, opt);
    add("chamber_norm", std::fabs(norm - 1) <= 1e-8, "integral of phi over chamber = " + report::format_double(norm), false);
  } else {
    add("chamber_norm", true, "rank above quadrature maximum", false, true);
  }
  return out;
}

inline report::Table density_table(const Command& cmd) {
  const Rank n(cmd.rank);
  const LimitDensity density(n);
  const RadialDensity radial(n);
  report::Table t;
  if (!cmd.point.empty()) {
    add_index_columns(t, "a_", n.value());
    add_index_columns(t, "x_", n.value());
    for (const char* c : {"pmf", "pmf_float", "pmf_scaled", "phi", "radial"}) t.columns.emplace_back(c);
    const auto x = rescale(cmd.point, cmd.power);
    const Rational p = pmf(n, cmd.power, cmd.point);
    std::vector<report::Cell> row;
    push_ints(row, cmd.point);
    push_doubles(row, x);
    row.emplace_back(p);
    row.emplace_back(to_double(p));
    row.emplace_back(scaled_pmf(p, n.value(), cmd.power));
    row.emplace_back(density(x));
    row.emplace_back(radial(x));
    t.rows.push_back(std::move(row));
  } else {
    add_index_columns(t, "x_", n.value());
    t.columns.emplace_back("phi");
    t.columns.emplace_back("radial");
    std::vector<report::Cell> row;
    push_doubles(row, cmd.x);
    row.emplace_back(density(cmd.x));
    row.emplace_back(radial(cmd.x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline report::Table plot_data_table(Rank n, int power) {
  if (power == 0) throw DomainError("plot-data needs N >= 1 for rescaled coordinates");
  report::Table t;
  add_index_columns(t, "a_", n.value());
  add_index_columns(t, "x_", n.value());
  for (const char* c : {"pmf", "pmf_float", "pmf_scaled", "phi"}) t.columns.emplace_back(c);
  const LimitDensity density(n);
  for (const auto& r : decomposition_table(n, power).rows) {
    const auto x = rescale(r.a.coords(), power);
    std::vector<report::Cell> row;
    push_ints(row, r.a.coords());
    push_doubles(row, x);
    row.emplace_back(r.probability);
    row.emplace_back(to_double(r.probability));
    row.emplace_back(scaled_pmf(r.probability, n.value(), power));
    row.emplace_back(density(x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::filesystem::path output_path(const Command& cmd) {
  const char* dir = std::getenv("OUTPUT_DIR");
  const std::string ext = cmd.format == Format::json ? ".json" : ".csv";
  if (!cmd.output.empty()) {
    std::filesystem::path p(cmd.output);
    if (dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
    return p;
  }
  if (dir && *dir) {
    std::string name = std::string(verb_name(cmd.verb)) + "_n" + std::to_string(cmd.rank);
    if (cmd.has_power) name += "_N" + std::to_string(cmd.power);
    return std::filesystem::path(dir) / (name + ext);
  }
  return {};
}

}  // namespace detail

/// Builds the report for a parsed command; numeric failures propagate as exceptions.
inline report::Report build_report(const Command& cmd, int& exit_code) {
  const Rank n(cmd.rank);
  report::Report rep;
  rep.meta.verb = std::string(verb_name(cmd.verb));
  rep.meta.command_line = cmd.command_line;
  exit_code = kExitOk;
  switch (cmd.verb) {
    case Verb::decompose:
      rep.table = detail::decompose_table(n, cmd.power);
      break;
    case Verb::verify: {
      auto v = detail::verify_table(cmd);
      rep.table = std::move(v.table);
      rep.summary["pass"] = v.pass;
      if (!v.pass) exit_code = kExitVerification;
      break;
    }
    case Verb::density:
      rep.table = detail::density_table(cmd);
      break;
    case Verb::converge_local: {
      const auto rows = local_error_report(n, cmd.powers, cmd.cutoff);
      rep.table.columns = {"N", "cutoff", "max_rel_err"};
      detail::add_index_columns(rep.table, "argmax_a_", n.value());
      for (const auto& r : rows) {
        std::vector<report::Cell> row{static_cast<long long>(r.power), r.cutoff, r.max_rel_err};
        detail::push_ints(row, r.argmax.coords());
        rep.table.rows.push_back(std::move(row));
      }
      if (rows.size() >= 2) rep.summary["loglog_slope"] = loglog_slope(rows);
      break;
    }
    case Verb::converge_global: {
      rep.table.columns = {"N", "discrete", "discrete_float", "limit", "gap"};
      const double limit = orthotope_prob_limit(n, *cmd.box, cmd.tol);
      for (int p : cmd.powers) {
        const Rational d = orthotope_prob_discrete(n, p, *cmd.box);
        const double df = to_double(d);
        rep.table.rows.push_back({static_cast<long long>(p), d, df, limit, std::fabs(df - limit)});
      }
      break;
    }
    case Verb::sample: {
      rep.meta.seed = cmd.seed;
      detail::add_index_columns(rep.table, "a_", n.value());
      for (const auto& a : sample(n, cmd.power, cmd.count, cmd.seed)) {
        std::vector<report::Cell> row;
        detail::push_ints(row, a.coords());
        rep.table.rows.push_back(std::move(row));
      }
      break;
    }
    case Verb::plot_data:
      rep.table = detail::plot_data_table(n, cmd.power);
      break;
  }
  return rep;
}

inline std::string serialize(const report::Report& rep, Format f) {
  return f == Format::json ? report::to_json(rep).dump(2) + "\n" : report::to_csv(rep);
}

/// Runs a command, writing the report to `out` (or the output file) and diagnostics to `err`.
inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  report::Meta meta{std::string(verb_name(cmd.verb)), cmd.command_line, std::nullopt};
  auto fail = [&](int code, const std::string& kind, const std::string& message,
                  std::optional<double> best = std::nullopt) {
    if (cmd.format == Format::json) out << report::error_json(meta, kind, message, best).dump(2) << "\n";
    err << "bspin: " << kind << ": " << message << "\n";
    return code;
  };
  int code = kExitOk;
  std::string text;
  try {
    text = serialize(build_report(cmd, code), cmd.format);
  } catch (const QuadratureError& e) {
    return fail(kExitNumeric, "quadrature", e.what(), e.best_estimate());
  } catch (const SizeLimitError& e) {
    return fail(kExitNumeric, "size_limit", e.what());
  } catch (const DomainError& e) {
    return fail(kExitUsage, "invalid_value", e.what());
  }
  const auto path = detail::output_path(cmd);
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) return fail(kExitNumeric, "io", "cannot write " + path.string());
  }
  return code;
}

inline std::string usage() {
  return "usage: bspin <verb> --rank n [options]\n"
         "verbs:\n"
         "  decompose        --power N                 decomposition table (a, Dynkin labels, mult, dim, pmf)\n"
         "  verify           --power N [--nodes m]     sum rules, oracle equivalence, normalisation\n"
         "  density          --x x1,..  | --point a1,.. --power N\n"
         "  converge-local   --powers N1,N2,.. [--cutoff C]\n"
         "  converge-global  --powers N1,.. --box c1:d1,.. [--tol t]\n"
         "  sample           --power N --count k [--seed s]\n"
         "  plot-data        --power N\n"
         "common: --format csv|json  --output path\n";
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && (args.front() == "--help" || args.front() == "-h" || args.front() == "help")) {
    out << usage();
    return kExitOk;
  }
  Command cmd;
  try {
    cmd = parse_args(args);
  } catch (const UsageError& e) {
    bool json = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--format=json" || (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json")) json = true;
    }
    if (json) {
      report::Meta meta{args.empty() ? std::string() : args.front(), detail::join_command_line(args), std::nullopt};
      out << report::error_json(meta, to_string(e.kind()), e.what()).dump(2) << "\n";
    }
    err << "bspin: " << e.what() << "\n" << usage();
    return kExitUsage;
  }
  return run(cmd, out, err);
}

}  // namespace bspin::cli
