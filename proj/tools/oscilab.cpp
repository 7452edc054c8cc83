#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscilab/functionals.hpp"
#include "oscilab/generators.hpp"
#include "oscilab/io.hpp"
#include "oscilab/kfunctional.hpp"
#include "oscilab/maximal.hpp"
#include "oscilab/plot.hpp"
#include "oscilab/suites.hpp"

using namespace oscilab;
using json = nlohmann::ordered_json;

namespace {

// Where a function comes from: a CSV grid or a builtin generator.
struct Source {
  std::string input;
  std::string kind;
  int d = 1;
  int N = 64;
  std::uint64_t seed = 1;
  std::vector<std::string> params;  // key=value

  void attach(CLI::App* app) {
    app->add_option("-i,--input", input, "grid CSV ('-' for stdin)");
    app->add_option("-k,--kind", kind, "builtin generator instead of --input")
        ->check(CLI::IsMember({"constant", "indicator", "logspike", "random_steps", "cosine_mix", "checkerboard"}));
    app->add_option("--d", d, "dimension")->check(CLI::Range(1, 2));
    app->add_option("--N", N, "cells per side")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "generator seed");
    app->add_option("-p,--param", params, "generator parameter key=value (c, lo, hi, height, a, pieces, terms, block)");
  }

  GridFunction load() const {
    if (!input.empty() && !kind.empty()) throw ConfigError("give either --input or --kind, not both");
    if (!input.empty()) {
      if (input == "-") return io::read_grid_csv(std::cin);
      return io::load_grid(input);
    }
    if (kind.empty()) throw ConfigError("no function: give --input or --kind");
    gen::Params p;
    for (const std::string& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("parameter needs key=value: " + kv);
      try {
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad parameter value: " + kv);
      }
    }
    return gen::generate(kind, GridShape{d, N}, p, seed);
  }
};

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& out, Fn&& write) {
  if (out.empty() || out == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + out);
  write(f);
  if (!f) throw ConfigError("write failed: " + out);
}

KMethod method_from_flag(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::toupper(c)); });
  if (s == "PACK-P" || s == "PACKP") s = "PACK_P";
  if (s == "L1LINF") return KMethod::L1Linf;
  return parse_kmethod(s);
}

json packing_value(const PackingValue& v, int dim) {
  return {{"value", v.value}, {"exact", v.exact}, {"witness", io::to_json(v.witness, dim)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscilab: oscillation functionals, maximal operators and K-functionals on grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "oscilab 1.0");

  std::string out;
  double s = default_local_s;
  std::vector<std::string> spaces;
  bool exact_small = false;

  // gen
  Source gen_src;
  auto* gen_cmd = app.add_subcommand("gen", "write a builtin function as grid CSV");
  gen_src.attach(gen_cmd);
  gen_cmd->add_option("-o,--out", out, "output path (default stdout)");

  // norm
  Source norm_src;
  auto* norm_cmd = app.add_subcommand("norm", "r.i. norms of f, f# and M#_s f");
  norm_src.attach(norm_cmd);
  norm_cmd->add_option("--space", spaces, "lp:<p>|weak:<p>|marcinkiewicz:<preset|csv>")->default_str("lp:1");
  norm_cmd->add_option("--s", s, "local maximal parameter")->check(CLI::Range(0.0, 1.0));
  norm_cmd->add_option("-o,--out", out, "JSON output path");

  // maximal
  Source max_src;
  std::string op = "sharp";
  bool as_profile = false;
  auto* max_cmd = app.add_subcommand("maximal", "apply a maximal operator");
  max_src.attach(max_cmd);
  max_cmd->add_option("--op", op, "hl | sharp | local")->check(CLI::IsMember({"hl", "sharp", "local"}));
  max_cmd->add_option("--s", s, "local maximal parameter")->check(CLI::Range(0.0, 1.0));
  max_cmd->add_flag("--profile", as_profile, "write the decreasing rearrangement instead of the grid");
  max_cmd->add_option("-o,--out", out, "output path");

  // garo
  Source garo_src;
  auto* garo_cmd = app.add_subcommand("garo", "Garsia-Rodemich and packing functionals");
  garo_src.attach(garo_cmd);
  garo_cmd->add_option("--space", spaces, "r.i. space")->default_str("lp:1");
  garo_cmd->add_option("--s", s, "local maximal parameter")->check(CLI::Range(0.0, 1.0));
  garo_cmd->add_flag("--exact-small", exact_small, "solve the exact LP on tiny grids");
  garo_cmd->add_option("-o,--out", out, "JSON output path");

  // kprofile
  Source k_src;
  std::vector<std::string> methods;
  std::vector<double> t_grid;
  double kp = 0.5;
  std::string k_json;
  auto* k_cmd = app.add_subcommand("kprofile", "K(t, f; L1, BMO) on a t grid");
  k_src.attach(k_cmd);
  k_cmd->add_option("-m,--method", methods, "BS | JT | PACK | PACK_P | LP | L1Linf")->default_str("BS JT PACK");
  k_cmd->add_option("-t,--t", t_grid, "evaluation points in (0,1] (default: log grid plus breakpoints)");
  k_cmd->add_option("--s", s, "local maximal parameter (JT)")->check(CLI::Range(0.0, 1.0));
  k_cmd->add_option("--pack-p", kp, "exponent for PACK_P")->check(CLI::Range(0.0, 1.0));
  k_cmd->add_option("-o,--out", out, "CSV output path (t,value,method)");
  k_cmd->add_option("--json", k_json, "also write the profiles as JSON");

  // verify
  std::vector<std::string> suites;
  verify::Config vcfg;
  auto* v_cmd = app.add_subcommand("verify", "run verification suites; exit 0 iff every hard check passes");
  v_cmd->add_option("--suite", suites, "rearr | maximal | garo | kfun | morrey | blowup | all")->default_str("all");
  v_cmd->add_option("--seed", vcfg.seed, "corpus seed");
  v_cmd->add_option("--s", vcfg.s, "local maximal parameter")->check(CLI::Range(0.0, 1.0));
  v_cmd->add_option("--blowup-log-res", vcfg.blowup_log_res, "blow-up family resolution 2^k")->check(CLI::Range(8, 24));
  v_cmd->add_option("-o,--out", out, "JSON report path");

  // plot
  std::vector<std::string> plot_inputs;
  std::string title;
  auto* plot_cmd = app.add_subcommand("plot", "SVG step plot of profile CSVs");
  plot_cmd->add_option("inputs", plot_inputs, "profile CSV files (t,value[,method])")->required();
  plot_cmd->add_option("--title", title, "plot title");
  plot_cmd->add_option("-o,--out", out, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto parse_spaces = [&] {
      if (spaces.empty()) spaces.push_back("lp:1");
      std::vector<RISpace> xs;
      for (const std::string& sp : spaces) xs.push_back(RISpace::parse(sp));
      return xs;
    };

    if (*gen_cmd) {
      const GridFunction f = gen_src.load();
      emit(out, [&](std::ostream& o) { io::write_grid_csv(o, f); });
      return 0;
    }

    if (*norm_cmd) {
      const GridFunction f = norm_src.load();
      const auto fsharp = rearrange(sharp_maximal(f));
      const auto local = rearrange(local_maximal(f, s));
      json j;
      j["d"] = f.dim();
      j["N"] = f.res();
      j["s"] = s;
      j["bmo"] = bmo_norm(f);
      j["oscillation_gap"] = oscillation_gap(f).sup;
      j["median"] = median(f);
      auto& arr = j["norms"] = json::array();
      for (const RISpace& x : parse_spaces())
        arr.push_back({{"space", x.name()},
                       {"f", norm(x, f)},
                       {"f_minus_median", norm(x, f.shifted(median(f)))},
                       {"sharp", norm(x, fsharp)},
                       {"local_maximal", norm(x, local)}});
      emit(out, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
      return 0;
    }

    if (*max_cmd) {
      const GridFunction f = max_src.load();
      const GridFunction m = op == "hl" ? hl_maximal(f) : op == "sharp" ? sharp_maximal(f) : local_maximal(f, s);
      emit(out, [&](std::ostream& o) {
        if (as_profile)
          io::write_profile_csv(o, rearrange(m));
        else
          io::write_grid_csv(o, m);
      });
      return 0;
    }

    if (*garo_cmd) {
      const GridFunction f = garo_src.load();
      const int dim = f.dim();
      json j;
      j["d"] = dim;
      j["N"] = f.res();
      j["jn_2"] = packing_value(jn_norm(f, 2), dim);
      j["gp_2"] = packing_value(gp_norm(f, 2), dim);
      j["gp_inf"] = packing_value(gp_norm(f, std::numeric_limits<double>::infinity()), dim);
      auto& arr = j["garo"] = json::array();
      for (const RISpace& x : parse_spaces()) {
        const GaRoEstimate e = garo_norm(f, x, s, exact_small);
        json g{{"space", x.name()}, {"upper", e.upper}, {"lower", e.lower}, {"s", e.s_used}};
        g["exact"] = e.exact ? json(*e.exact) : json(nullptr);
        if (e.witness_packing) g["witness"] = io::to_json(*e.witness_packing, dim);
        if (e.gamma) g["gamma"] = e.gamma->values();
        arr.push_back(g);
      }
      emit(out, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
      return 0;
    }

    if (*k_cmd) {
      const GridFunction f = k_src.load();
      if (methods.empty()) methods = {"BS", "JT", "PACK"};
      std::vector<double> ts = t_grid;
      if (ts.empty()) ts = default_t_grid(f.mean_zero());
      std::sort(ts.begin(), ts.end());
      std::vector<KProfile> ks;
      for (const std::string& m : methods) {
        const KMethod km = method_from_flag(m);
        ks.push_back(km == KMethod::L1Linf ? k_l1_linf(f, ts) : k_l1_bmo(f, ts, km, s, kp));
      }
      emit(out, [&](std::ostream& o) { io::write_kprofile_csv(o, ks); });
      if (!k_json.empty()) {
        json j = json::array();
        for (const KProfile& k : ks) j.push_back(io::to_json(k));
        emit(k_json, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
      }
      return 0;
    }

    if (*v_cmd) {
      if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) suites = verify::suite_ids();
      for (const std::string& id : suites)
        if (std::find(verify::suite_ids().begin(), verify::suite_ids().end(), id) == verify::suite_ids().end())
          throw ConfigError("unknown suite: " + id);
      bool ok = true;
      json reports = json::array();
      for (const std::string& id : suites) {
        const auto checks = verify::run_suite(id, vcfg);
        ok = ok && verify::all_passed(checks);
        reports.push_back(verify::report(id, vcfg, checks));
        for (const auto& c : checks)
          std::cerr << "[" << c.status() << "] " << id << ": " << c.name << " (measured " << c.measured << ")\n";
      }
      emit(out, [&](std::ostream& o) { o << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n"; });
      return ok ? 0 : 1;
    }

    if (*plot_cmd) {
      std::vector<plot::Curve> curves;
      for (const std::string& path : plot_inputs) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        for (auto& [label, pts] : io::read_kprofile_csv(in)) {
          plot::Curve c;
          c.label = label == "profile" && plot_inputs.size() > 1 ? path : label;
          for (auto [t, v] : pts) {
            c.t.push_back(t);
            c.v.push_back(v);
          }
          curves.push_back(std::move(c));
        }
      }
      plot::write_svg(out, curves, title);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
