// dehnvol: complex volumes of Dehn fillings via deformed Ptolemy varieties.
//
//   dehnvol volume --census fig8 --fill 1/5 --link-exterior --uv 4,0
//   dehnvol check  --census fig8 --fill 1/5
//   dehnvol apoly  --census fig8

#include <CLI11.hpp>
#include <iostream>

#include "dehnvol/pipeline.hpp"

using namespace dehnvol;

namespace {

std::vector<std::pair<long, long>> parse_uv(const std::string& text) {
  std::vector<std::pair<long, long>> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    auto pos = tok.find(',');
    if (pos == std::string::npos) throw config_error("bad --uv entry: " + tok);
    out.push_back({std::stol(tok.substr(0, pos)), std::stol(tok.substr(pos + 1))});
  }
  return out;
}

std::vector<std::pair<cplx, cplx>> parse_ml(const std::string& text) {
  std::vector<std::pair<cplx, cplx>> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    double a, b, c, d;
    if (std::sscanf(tok.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
      throw config_error("bad --ml entry (want reM,imM,reL,imL): " + tok);
    out.push_back({cplx(a, b), cplx(c, d)});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex volume of Dehn fillings of cusped 3-manifolds"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string uv_text, ml_text, format = "json";
  long k_lo = -8, k_hi = 8;
  bool at_m_one = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--census", cfg.census, "bundled census name (fig8)");
    cmd->add_option("--triangulation", cfg.triangulation_path,
                    "triangulation JSON file");
    cmd->add_option("--fill", cfg.fill, "filling vector, e.g. 1/5 or inf,2/3");
    cmd->add_option("--uv", uv_text, "(u,v) override per cusp, e.g. 4,0;0,0");
    cmd->add_option("--ml", ml_text,
                    "explicit holonomy per cusp: reM,imM,reL,imL;...");
    cmd->add_option("--starts", cfg.starts, "Newton multistart count");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--tol", cfg.tol, "solver residual tolerance");
    cmd->add_option("--k-lo", k_lo, "log-branch sweep lower bound");
    cmd->add_option("--k-hi", k_hi, "log-branch sweep upper bound");
    cmd->add_flag("--link-exterior", cfg.link_exterior,
                  "report CS modulo pi^2 instead of pi^2/2");
    cmd->add_option("--precision", cfg.precision, "printed decimal places");
  };

  auto* cvol = app.add_subcommand("volume", "complex volume of a filling");
  add_common(cvol);
  cvol->add_option("--format", format, "json or text");

  auto* cchk = app.add_subcommand("check", "run the diagnostic residual table");
  add_common(cchk);
  cchk->add_flag("--corrupt-a", cfg.corrupt_a,
                 "debug: damage the log-cocycle before the checks");

  auto* capo = app.add_subcommand("apoly", "reduced-variable A-polynomial");
  capo->add_option("--census", cfg.census, "bundled census name (fig8)");
  capo->add_option("--triangulation", cfg.triangulation_path,
                   "triangulation JSON file");
  capo->add_flag("--at-m-one", at_m_one, "substitute M = 1");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.k_range = {k_lo, k_hi};
    if (!uv_text.empty()) cfg.uv_override = parse_uv(uv_text);
    if (!ml_text.empty()) cfg.explicit_ml = parse_ml(ml_text);

    if (app.got_subcommand(capo)) {
      std::cout << run_apoly(cfg, at_m_one) << "\n";
      return 0;
    }
    if (app.got_subcommand(cchk)) {
      auto [table, ok] = run_check(cfg);
      std::cout << table;
      return ok ? 0 : 1;
    }
    auto run = run_volume(cfg);
    std::cout << (format == "text" ? volume_text(run, cfg)
                                   : volume_json(run, cfg));
    return run.checks.pass() ? 0 : 1;
  } catch (const config_error& e) {
    std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"numerical\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
}
