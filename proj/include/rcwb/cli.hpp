#pragma once

// Command-line front end. run() takes the arguments after the program name
// and returns the process exit code: 0 when every check passes, 1 when a
// verification fails (or rho is out of range), 2 on usage errors.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcwb/ah_system.hpp"
#include "rcwb/certificate_verify.hpp"
#include "rcwb/certificates.hpp"
#include "rcwb/matrix_model.hpp"
#include "rcwb/sequences.hpp"
#include "rcwb/serialize.hpp"

namespace rcwb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Format { Csv, Json, Text };

struct CliConfig {
  std::string subcommand;
  Format format = Format::Json;
  unsigned terms = certificates::kDefaultTerms;
  unsigned n_max = 12;
  std::string rho = "0";
  std::string system = "paper-a";
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  unsigned dim = 16;
  double tol = 1e-9;
  unsigned window = certificates::kDefaultWindow;
  std::string out;
  std::string input;
};

namespace detail {

inline std::string approx(const Rational& q) {
  std::ostringstream s;
  s << std::setprecision(17) << to_double(q);
  return s.str();
}

inline ah::DiagonalSystemSpec load_system(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "paper-a") return ah::DiagonalSystemSpec::paper_a();
  if (lower == "paper-b") return ah::DiagonalSystemSpec::paper_b();
  std::ifstream in(name);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open system file '" + name + "'");
  try {
    return io::system_from_json(io::json::parse(in));
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed system file: ") + e.what());
  }
}

inline int cmd_seq(const CliConfig& cfg, std::ostream& out) {
  const auto table = sequences::seq_table(cfg.n_max);
  if (cfg.format == Format::Csv) {
    sequences::write_csv(out, table);
  } else if (cfg.format == Format::Json) {
    out << io::to_json(table).dump(2) << '\n';
  } else {
    for (const auto& row : table.rows) {
      out << "n=" << row.n << " r=" << row.r << " s=" << row.s << " t=" << row.t << " u=" << to_string(row.u)
          << " (approx " << approx(row.u) << ")\n";
    }
  }
  return table.violations().empty() ? kExitOk : kExitFailed;
}

inline int cmd_kappa(const CliConfig& cfg, std::ostream& out) {
  const auto k = sequences::kappa_interval(cfg.terms);
  if (cfg.format == Format::Text) {
    out << "terms " << k.terms << '\n'
        << "lower " << to_string(k.lower) << " (approx " << approx(k.lower) << ")\n"
        << "upper " << to_string(k.upper) << " (approx " << approx(k.upper) << ")\n"
        << "width approx " << approx(k.width()) << '\n';
  } else {
    out << io::to_json(k).dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_ranks(const CliConfig& cfg, std::ostream& out) {
  const auto tracks = ah::iterate_and_check(std::max(1U, cfg.n_max));
  const auto identities = sequences::rank_recursion_identities(cfg.n_max);
  const bool ok = tracks.passed() && identities.passed();
  if (cfg.format == Format::Text) {
    for (const auto& c : tracks.checks) {
      out << c.system << ' ' << c.track << " n=" << c.stage << ' ' << (c.passed ? "ok" : "FAILED") << '\n';
    }
    for (const auto& c : identities.checks) {
      out << c.name << " n=" << c.n << ' ' << (c.passed ? "ok" : "FAILED") << '\n';
    }
    out << (ok ? "all checks passed\n" : "some checks FAILED\n");
  } else {
    out << io::json{{"passed", ok}, {"tracks", io::to_json(tracks)}, {"identities", io::to_json(identities)}}.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_bounds(const CliConfig& cfg, std::ostream& out) {
  const auto spec = load_system(cfg.system);
  io::json report = {{"system", ah::to_string(spec.preset())}, {"terms", cfg.terms}};
  std::optional<certificates::RcInterval> rc;
  if (spec.preset() == ah::Preset::Custom) {
    rc = certificates::niu_upper_bound(spec, cfg.terms);
  } else {
    rc = certificates::rc_interval(spec.preset(), cfg.terms);
    const auto kappa = sequences::kappa_interval(cfg.terms);
    report["kappa"] = io::to_json(kappa);
    if (spec.preset() == ah::Preset::PaperB) {
      report["fixed_point_algebra"] = io::to_json(certificates::fixed_point_relation(*rc, 2));
    }
  }
  report["rc"] = io::to_json(*rc);
  if (cfg.format == Format::Text) {
    out << "system " << ah::to_string(spec.preset()) << '\n'
        << "rc lower " << to_string(rc->lower) << " (approx " << approx(rc->lower) << ")\n"
        << "rc upper " << to_string(rc->upper) << " (approx " << approx(rc->upper) << ")\n";
  } else {
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_cert_lower(const CliConfig& cfg, std::ostream& out) {
  const auto spec = load_system(cfg.system);
  const auto cert = certificates::rc_lower_certificate(spec.preset(), parse_rational(cfg.rho), cfg.terms, cfg.window);
  if (cfg.format == Format::Text) {
    out << "system " << ah::to_string(cert.system) << "\nrho " << to_string(cert.rho) << "\nn " << cert.n << "\nM "
        << cert.M << "\nwindow " << cert.window.front() << ".." << cert.window.back() << '\n';
  } else {
    out << io::to_json(cert).dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_cert_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ifstream in(cfg.input);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open certificate '" + cfg.input + "'");
  certificates::RcCertificate cert;
  try {
    cert = io::certificate_from_json(io::json::parse(in));
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed certificate: ") + e.what());
  }
  const auto report = certificates::verify_certificate(cert);
  if (cfg.format == Format::Text) {
    for (const auto& s : report.steps) {
      out << s.step << ' ' << s.check;
      if (s.stage) out << " m=" << *s.stage;
      out << ' ' << (s.passed ? "ok" : "FAILED") << '\n';
    }
    out << (report.verified() ? "verified\n" : "REJECTED\n");
  } else {
    out << io::to_json(report).dump(2) << '\n';
  }
  for (const auto& f : report.failures()) {
    err << "failed: " << f.step << ' ' << f.check;
    if (f.stage) err << " m=" << *f.stage;
    if (!f.detail.empty()) err << " (" << f.detail << ')';
    err << '\n';
  }
  return report.verified() ? kExitOk : kExitFailed;
}

inline int cmd_matrix_suite(const CliConfig& cfg, std::ostream& out) {
  matrix::SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.trials = cfg.trials;
  sc.dim_max = cfg.dim;
  sc.tol = cfg.tol;
  sc.threads = matrix::threads_from_env();
  const auto report = matrix::lemma_suite(sc);
  if (cfg.format == Format::Text) {
    for (const auto& [name, c] : report.checks) {
      out << name << ": " << c.passes << '/' << c.trials << " passed\n";
    }
    for (const auto& p : report.probes) {
      out << "delta probe eps=" << p.eps << " mean approx " << p.mean_delta << " min approx " << p.min_delta << '\n';
    }
  } else {
    io::json j = io::to_json(report);
    j["seed"] = std::to_string(cfg.seed);
    j["trials"] = cfg.trials;
    j["dim_max"] = cfg.dim;
    out << j.dump(2) << '\n';
  }
  return report.total_failures() == 0 ? kExitOk : kExitFailed;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"rcwb: radius-of-comparison tables, certificates and checks", "rcwb"};
  app.require_subcommand(1, 1);

  std::string format_name;
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}, {"text", Format::Text}};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "csv, json or text")->check(CLI::IsMember({"csv", "json", "text"}));
    sub->add_option("--out", cfg.out, "write data to this file instead of standard output");
  };

  auto* seq = app.add_subcommand("seq", "sequence table d, l, r, s, t, u");
  seq->add_option("--max", cfg.n_max, "last stage")->check(CLI::Range(0U, 100000U));
  add_common(seq);

  auto* kappa = app.add_subcommand("kappa", "rational enclosure of kappa");
  kappa->add_option("--terms", cfg.terms, "number of product terms")->check(CLI::Range(1U, 100000U));
  add_common(kappa);

  auto* ranks = app.add_subcommand("ranks", "replay the rank closed forms and recursion identities");
  ranks->add_option("--max", cfg.n_max, "last stage")->check(CLI::Range(1U, 4096U));
  add_common(ranks);

  auto* bounds = app.add_subcommand("bounds", "certified lower and mean-dimension upper bounds");
  bounds->add_option("--system", cfg.system, "paper-a, paper-b or a system JSON file");
  bounds->add_option("--terms", cfg.terms)->check(CLI::Range(1U, 100000U));
  add_common(bounds);

  auto* cert_lower = app.add_subcommand("cert-lower", "emit a lower-bound certificate for rho");
  cert_lower->add_option("--system", cfg.system, "paper-a or paper-b");
  cert_lower->add_option("--rho", cfg.rho, "nonnegative rational p/q")->required();
  cert_lower->add_option("--terms", cfg.terms)->check(CLI::Range(1U, 100000U));
  cert_lower->add_option("--window", cfg.window, "number of stages replayed after n")->check(CLI::Range(1U, 4096U));
  add_common(cert_lower);

  auto* cert_verify = app.add_subcommand("cert-verify", "replay a certificate file");
  cert_verify->add_option("certificate", cfg.input, "certificate JSON")->required();
  add_common(cert_verify);

  auto* suite = app.add_subcommand("matrix-suite", "randomized matrix lemma suite");
  suite->add_option("--seed", cfg.seed);
  suite->add_option("--trials", cfg.trials)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  suite->add_option("--dim", cfg.dim, "largest matrix dimension")->check(CLI::Range(2U, 512U));
  suite->add_option("--tol", cfg.tol)->check(CLI::PositiveNumber);
  add_common(suite);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!format_name.empty()) {
    cfg.format = formats.at(format_name);
  } else if (cfg.subcommand == "seq") {
    cfg.format = Format::Csv;
  }
  if (cfg.format == Format::Csv && cfg.subcommand != "seq") {
    err << "usage error: csv output exists only for seq\n";
    return kExitUsage;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "cannot write '" << cfg.out << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& data = cfg.out.empty() ? out : file;

  try {
    int code = kExitUsage;
    if (cfg.subcommand == "seq") code = detail::cmd_seq(cfg, data);
    if (cfg.subcommand == "kappa") code = detail::cmd_kappa(cfg, data);
    if (cfg.subcommand == "ranks") code = detail::cmd_ranks(cfg, data);
    if (cfg.subcommand == "bounds") code = detail::cmd_bounds(cfg, data);
    if (cfg.subcommand == "cert-lower") code = detail::cmd_cert_lower(cfg, data);
    if (cfg.subcommand == "cert-verify") code = detail::cmd_cert_verify(cfg, data, err);
    if (cfg.subcommand == "matrix-suite") code = detail::cmd_matrix_suite(cfg, data);
    if (code == kExitFailed) err << cfg.subcommand << ": checks failed\n";
    return code;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::RhoTooLarge:
      case ErrorCode::Divergent:
        return kExitFailed;
      default:
        return kExitUsage;
    }
  }
}

}  // namespace rcwb::cli
