#pragma once

// Argument parsing for `fnr <command> [flags]`.

#include <CLI11.hpp>

#include <complex>
#include <iostream>
#include <string>
#include <vector>

#include "fnr/plotcli.hpp"

namespace fnr::cli {

inline std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("--a expects re,im; got " + text);
  }
}

/// Parses argv and runs the command. Output files are reported on stdout,
/// diagnostics on stderr. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical range of the Foguel operator F_aI: figures, verification and elimination", "fnr"};
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::vector<std::string> r_text;
  std::string a_text;
  std::vector<std::string> formats;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--r", r_text, "modulus parameter r = |a|/2 (resultant: exact rational, repeatable)");
    sub->add_option("--a", a_text, "complex a as re,im (sets r = |a|/2)");
    sub->add_option("--samples", cfg.samples, "boundary / line-family samples")->capture_default_str();
    sub->add_option("--N", cfg.truncation, "largest truncation level")->capture_default_str();
    sub->add_option("--grid", cfg.grid, "theta grid size")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for rational sample points")->capture_default_str();
    sub->add_option("--out", cfg.out, "output path stem (extension appended per format)");
    sub->add_option("--format", formats, "csv | svg | json (repeatable)")
        ->check(CLI::IsMember({"csv", "svg", "json"}));
    sub->add_option("--tol-alg", cfg.tol.algebraic, "tolerance for algebraic identities")->capture_default_str();
    sub->add_option("--tol-env", cfg.tol.envelope, "relative tolerance for envelope-on-sextic")->capture_default_str();
    sub->add_option("--tol-conv", cfg.tol.convergence, "budget for closed form minus compression at N")
        ->capture_default_str();
    sub->add_option("--degree-bound", cfg.degree_bound, "total-degree bound for the cofactor")->capture_default_str();
    sub->add_option("--boundary-color", cfg.style.boundary, "SVG colour of the boundary / line family");
    sub->add_option("--aux-color", cfg.style.auxiliary, "SVG colour of dashed circles and sextic");
    sub->add_option("--switch-color", cfg.style.switching, "SVG colour of switching lines and points");
  };

  auto* support = app.add_subcommand("support-lines", "supporting-line family (CSV + SVG)");
  auto* boundary = app.add_subcommand("boundary", "boundary curve with circles, sextic and switching points");
  auto* verify = app.add_subcommand("verify", "run the verification suite and write a JSON report");
  auto* resultant = app.add_subcommand("resultant", "exact elimination certificate for the boundary sextic");
  for (auto* sub : {support, boundary, verify, resultant}) common(sub);
  verify->add_flag("--with-resultant", cfg.with_resultant, "include the elimination certificate");
  resultant->add_flag("--mutate", cfg.mutate, "self-test: corrupt one coefficient of the sextic");
  resultant->add_flag("--symbolic", cfg.symbolic, "also compute the full resultant polynomial and divide exactly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Success : UsageError;
  }

  for (auto* sub : {support, boundary, verify, resultant})
    if (sub->parsed()) cfg.command = sub->get_name();
  cfg.samples_explicit = app.get_subcommand(cfg.command)->count("--samples") > 0;
  for (const auto& f : formats) cfg.formats.insert(f == "csv" ? Format::Csv : f == "svg" ? Format::Svg : Format::Json);

  try {
    if (!a_text.empty() && !r_text.empty()) throw std::invalid_argument("give either --r or --a, not both");
    if (!a_text.empty()) {
      const auto params = FoguelParams::from_a(parse_complex(a_text));
      cfg.a = params.a;
      cfg.r = params.r;
    }
    if (cfg.command == "resultant") {
      cfg.r_values = r_text;
    } else if (!r_text.empty()) {
      if (r_text.size() > 1) throw std::invalid_argument("--r accepts one value for " + cfg.command);
      cfg.r_values = r_text;
      try {
        cfg.r = parse_rational(r_text.front()).get_d();
      } catch (const std::invalid_argument&) {
        std::size_t used = 0;
        cfg.r = std::stod(r_text.front(), &used);
        if (used != r_text.front().size()) throw std::invalid_argument("--r: cannot parse " + r_text.front());
      }
      require_radius(cfg.r);
    }
  } catch (const std::logic_error& e) {
    err << "fnr: " << e.what() << "\n";
    return UsageError;
  }

  const CommandResult res = run(cfg);
  for (const auto& p : res.written) out << "wrote " << p.string() << "\n";
  if (res.exit_code == Success) {
    out << res.message;
  } else {
    err << res.message;
    if (!res.message.empty() && res.message.back() != '\n') err << "\n";
  }
  return res.exit_code;
}

}  // namespace fnr::cli
