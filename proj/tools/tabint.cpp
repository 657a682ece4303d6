// Command-line driver: strongest implicates, Craig/uniform interpolants, CIP
// decision, witness families, forward/backward translations, bisimulation
// queries and input validation for tabular modal logics.
//
// Exit codes: 0 success, 1 usage or input error, 2 failed verification,
// 3 interpolation refused because the logic lacks CIP.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "tabint/alt1.hpp"
#include "tabint/catalog.hpp"
#include "tabint/interpolation.hpp"
#include "tabint/json_io.hpp"

using namespace tabint;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitNoCip = 3;

struct Output {
  std::string format = "text";
  std::string path;
  bool timing = false;

  void emit(const json& report, const std::string& text) const {
    std::string payload = (format == "json") ? report.dump(2) + "\n" : text;
    if (path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(path);
      out << payload;
    }
  }
};

Logic load_logic(const std::string& spec) {
  if (auto logic = logic_by_name(spec)) return *logic;
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("unknown logic name and unreadable file: " + spec);
  json j;
  in >> j;
  return logic_from_json(j);
}

Signature parse_sigma(const std::string& csv) {
  Signature sigma;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) sigma.insert(atom_from_text(cur));
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return sigma;
}

std::string sigma_text(const Signature& sigma) {
  std::string out;
  for (const Atom& a : sigma) {
    if (!out.empty()) out += ",";
    out += a.text();
  }
  return out;
}

json size_report(Formula f) {
  return json{{"dag_size", dag_size(f)}, {"tree_size", tree_size(f)}};
}

void add_formula(json& report, const std::string& key, Formula f) {
  report[key] = render(f);
  report[key + "_sizes"] = size_report(f);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

void finish(json& report, const Output& out, const Timer& timer,
            const std::string& text) {
  if (out.timing) report["time_ms"] = timer.elapsed_ms();
  out.emit(report, text);
}

std::string verdict_text(const Verdict& v) {
  std::string out = v.holds ? "verified" : "verification FAILED";
  if (!v.detail.empty()) out += ": " + v.detail;
  if (v.witness_model) out += "\ncountermodel: " + model_to_json(*v.witness_model).dump();
  return out;
}

std::vector<unsigned> parse_table(const std::string& csv) {
  std::vector<unsigned> table;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) table.push_back(static_cast<unsigned>(std::stoul(cur)));
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interpolation toolkit for tabular modal logics"};
  app.require_subcommand(1);

  Output out;
  Budgets budgets = Budgets::from_env();
  uint64_t budget_valuations = 0;
  app.add_option("--format", out.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", out.path, "write the report to a file");
  app.add_flag("--timing", out.timing, "include time_ms in JSON reports");
  app.add_option("--budget-valuations", budget_valuations,
                 "cap on enumerated valuations per check");

  std::string logic_name, phi_text, psi_text, xi_text, sigma_csv, frame_name;
  bool verify = false;

  auto* implicate = app.add_subcommand("implicate", "strongest L(sigma)-implicate");
  implicate->add_option("--logic", logic_name)->required();
  implicate->add_option("--phi", phi_text)->required();
  implicate->add_option("--sigma", sigma_csv, "comma-separated atoms")->required();
  implicate->add_flag("--verify", verify);

  auto* uniform = app.add_subcommand("uniform", "uniform L(sigma)-interpolant");
  uniform->add_option("--logic", logic_name)->required();
  uniform->add_option("--phi", phi_text)->required();
  uniform->add_option("--sigma", sigma_csv)->required();
  uniform->add_flag("--verify", verify);

  auto* craig = app.add_subcommand("craig", "Craig interpolant for phi -> psi");
  craig->add_option("--logic", logic_name)->required();
  craig->add_option("--phi", phi_text)->required();
  craig->add_option("--psi", psi_text)->required();
  craig->add_flag("--verify", verify);

  auto* cip = app.add_subcommand("cip", "decide the Craig interpolation property");
  cip->add_option("--logic", logic_name)->required();

  auto* witness = app.add_subcommand("witness", "witness formula families");
  witness->require_subcommand(1);
  unsigned wn = 1, wk = 1;
  std::string ftable_csv;
  int chi_depth = -1;
  auto* w_imp = witness->add_subcommand("implicate");
  w_imp->add_option("--n", wn)->required();
  w_imp->add_option("--k", wk);
  w_imp->add_option("--f-table", ftable_csv,
                    "comma-separated values f(0),...,f(kn); default identity");
  w_imp->add_option("--chi-depth", chi_depth);
  auto* w_craig = witness->add_subcommand("craig");
  w_craig->add_option("--n", wn)->required();
  auto* w_nocip = witness->add_subcommand("nocip");
  w_nocip->add_option("--phi", phi_text)->required();
  w_nocip->add_option("--psi", psi_text)->required();

  auto* translate = app.add_subcommand("translate", "modal <-> propositional bridges");
  translate->require_subcommand(1);
  auto* t_fwd = translate->add_subcommand("forward");
  t_fwd->add_option("--logic", logic_name)->required();
  t_fwd->add_option("--phi", phi_text)->required();
  t_fwd->add_option("--frame", frame_name, "restrict to one frame by name");
  auto* t_bwd = translate->add_subcommand("backward");
  t_bwd->add_option("--logic", logic_name)->required();
  t_bwd->add_option("--xi", xi_text)->required();
  t_bwd->add_option("--sigma", sigma_csv)->required();
  t_bwd->add_option("--frame", frame_name, "restrict to one frame by name");

  auto* alt1 =
      app.add_subcommand("alt1", "uniform interpolant in the one-successor logic");
  alt1->add_option("--phi", phi_text)->required();
  alt1->add_option("--sigma", sigma_csv)->required();
  alt1->add_flag("--verify", verify);
  unsigned alt_bound = 0;
  alt1->add_option("--bound", alt_bound, "chain length bound (default depth+2)");

  auto* bisim = app.add_subcommand("bisim", "sigma-bisimulation between two models");
  std::string model1_path, model2_path;
  bisim->add_option("--model1", model1_path)->required();
  bisim->add_option("--model2", model2_path)->required();
  bisim->add_option("--sigma", sigma_csv)->required();

  auto* validate = app.add_subcommand("validate", "check a logic/frame/model JSON file");
  std::string v_logic, v_frame, v_model;
  validate->add_option("--logic", v_logic);
  validate->add_option("--frame", v_frame);
  validate->add_option("--model", v_model);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (budget_valuations > 0) budgets.valuations = budget_valuations;

  Timer timer;
  try {
    if (*implicate || *uniform) {
      Logic logic = load_logic(logic_name);
      Formula phi = parse_formula(phi_text);
      Signature sigma = parse_sigma(sigma_csv);
      Formula chi = (*uniform) ? uniform_interpolant(logic, phi, sigma, budgets)
                               : strongest_implicate(logic, phi, sigma, budgets);
      json report{{"input", phi_text},
                  {"logic", logic.name()},
                  {"sigma", sigma_text(sigma)}};
      add_formula(report, "result_formula", chi);
      std::string text = render(chi) + "\n";
      int code = kExitOk;
      if (verify) {
        Verdict v = verify_strongest_implicate(logic, phi, sigma, chi, budgets);
        report["verified"] = v.holds;
        if (!v.holds) {
          report["verdict"] = verdict_to_json(v);
          code = kExitVerifyFailed;
        }
        text += verdict_text(v) + "\n";
      }
      finish(report, out, timer, text);
      return code;
    }

    if (*craig) {
      Logic logic = load_logic(logic_name);
      Formula phi = parse_formula(phi_text);
      Formula psi = parse_formula(psi_text);
      Formula chi = modal_craig_interpolant(logic, phi, psi, budgets);
      json report{{"input", phi_text + " -> " + psi_text}, {"logic", logic.name()}};
      add_formula(report, "result_formula", chi);
      std::string text = render(chi) + "\n";
      int code = kExitOk;
      if (verify) {
        Verdict v = verify_craig(logic, phi, psi, chi, budgets);
        report["verified"] = v.holds;
        if (!v.holds) {
          report["verdict"] = verdict_to_json(v);
          code = kExitVerifyFailed;
        }
        text += verdict_text(v) + "\n";
      }
      finish(report, out, timer, text);
      return code;
    }

    if (*cip) {
      Logic logic = load_logic(logic_name);
      auto witness_pair = has_cip_witness(logic, budgets);
      json report{{"logic", logic.name()}, {"has_cip", !witness_pair.has_value()}};
      std::string text = witness_pair ? "no\n" : "yes\n";
      if (witness_pair) {
        report["witness"] = json{{"model1", model_to_json(witness_pair->first)},
                                 {"model2", model_to_json(witness_pair->second)}};
        text += "bisimilar but non-isomorphic pair:\n" +
                model_to_json(witness_pair->first).dump() + "\n" +
                model_to_json(witness_pair->second).dump() + "\n";
      }
      finish(report, out, timer, text);
      return kExitOk;
    }

    if (*witness) {
      json report;
      std::string text;
      if (*w_imp) {
        std::vector<unsigned> table = parse_table(ftable_csv);
        if (table.empty()) {
          for (unsigned x = 0; x <= wn * wk; ++x) table.push_back(x);
          if (table.back() == 0) table.back() = 1;
        }
        std::optional<unsigned> depth;
        if (chi_depth >= 0) depth = static_cast<unsigned>(chi_depth);
        WitnessImplicate w = witness_implicate(wn, wk, table, depth);
        report = json{{"n", w.n},
                      {"k", w.k},
                      {"chi_depth", w.chi_depth},
                      {"sigma", sigma_text(w.sigma)},
                      {"chi_disjuncts", count_disjuncts(w.chi)}};
        add_formula(report, "phi", w.phi);
        add_formula(report, "chi", w.chi);
        text = "phi: " + render(w.phi) + "\nsigma: " + sigma_text(w.sigma) +
               "\nchi: " + render(w.chi) + "\n";
      } else if (*w_craig) {
        WitnessCraig w = witness_craig(wn);
        report = json{{"n", w.n}, {"sigma", sigma_text(w.sigma)}};
        add_formula(report, "phi", w.phi);
        add_formula(report, "psi", w.psi);
        add_formula(report, "interpolant", w.interpolant);
        text = "phi: " + render(w.phi) + "\npsi: " + render(w.psi) +
               "\ninterpolant: " + render(w.interpolant) + "\n";
      } else {
        auto [phi, psi] =
            witness_nocip(parse_formula(phi_text), parse_formula(psi_text));
        report = json{};
        add_formula(report, "phi", phi);
        add_formula(report, "psi", psi);
        text = "phi: " + render(phi) + "\npsi: " + render(psi) + "\n";
      }
      finish(report, out, timer, text);
      return kExitOk;
    }

    if (*translate) {
      Logic logic = load_logic(logic_name);
      json report{{"logic", logic.name()}};
      std::string text;
      if (*t_fwd) {
        Formula phi = parse_formula(phi_text);
        Formula result;
        if (!frame_name.empty()) {
          bool found = false;
          for (const PointedFrame& fr : logic.frames())
            if (fr.name() == frame_name) {
              result = tr_frame(fr, fr.root(), phi);
              found = true;
            }
          if (!found) throw std::invalid_argument("no frame named " + frame_name);
        } else {
          result = tr_logic(logic, phi);
        }
        report["input"] = phi_text;
        add_formula(report, "result_formula", result);
        json atoms = json::object();
        for (const Atom& a : signature_of(result)) {
          if (a.kind == AtomKind::Indexed)
            atoms[a.text()] = json{{"atom", a.base}, {"world", a.world}};
          else if (a.kind == AtomKind::Selector)
            atoms[a.text()] = json{{"selects_frame", a.frame}, {"root", a.world}};
        }
        report["atom_meanings"] = atoms;
        text = render(result) + "\n";
      } else {
        Formula xi = parse_formula(xi_text);
        Signature sigma = parse_sigma(sigma_csv);
        Formula result;
        if (!frame_name.empty()) {
          bool found = false;
          for (size_t i = 0; i < logic.frames().size(); ++i)
            if (logic.frames()[i].name() == frame_name) {
              result = rt_frame(logic, static_cast<int>(i), xi, sigma, budgets);
              found = true;
            }
          if (!found) throw std::invalid_argument("no frame named " + frame_name);
        } else {
          result = rt_logic(logic, xi, sigma, budgets);
        }
        result = simplify(result);
        report["input"] = xi_text;
        report["sigma"] = sigma_text(sigma);
        add_formula(report, "result_formula", result);
        text = render(result) + "\n";
      }
      finish(report, out, timer, text);
      return kExitOk;
    }

    if (*alt1) {
      Formula phi = parse_formula(phi_text);
      Signature tau = parse_sigma(sigma_csv);
      Formula psi = alt1_uniform_interpolant(phi, tau, budgets);
      json report{{"input", phi_text}, {"sigma", sigma_text(tau)}};
      add_formula(report, "result_formula", psi);
      std::string text = render(psi) + "\n";
      int code = kExitOk;
      if (verify) {
        unsigned bound = alt_bound ? alt_bound : modal_depth(phi) + 2;
        Verdict v = verify_alt1_interpolant(phi, tau, psi, bound, budgets);
        report["verified"] = v.holds;
        report["verification_bound"] = bound;
        if (!v.holds) {
          report["verdict"] = verdict_to_json(v);
          code = kExitVerifyFailed;
        }
        text += verdict_text(v) + "\n";
      }
      finish(report, out, timer, text);
      return code;
    }

    if (*bisim) {
      std::ifstream in1(model1_path), in2(model2_path);
      if (!in1 || !in2) throw std::invalid_argument("cannot read model files");
      json j1, j2;
      in1 >> j1;
      in2 >> j2;
      Model m1 = model_from_json(j1);
      Model m2 = model_from_json(j2);
      Signature sigma = parse_sigma(sigma_csv);
      auto rel = sigma_bisimulation(m1, m2, sigma);
      json report{{"sigma", sigma_text(sigma)}, {"bisimilar", rel.has_value()}};
      std::string text = rel ? "bisimilar\n" : "not bisimilar\n";
      if (rel) {
        json pairs = json::array();
        for (const auto& [a, b] : *rel) pairs.push_back(json::array({a, b}));
        report["relation"] = pairs;
        for (const auto& [a, b] : *rel) text += "  " + a + " ~ " + b + "\n";
      }
      finish(report, out, timer, text);
      return kExitOk;
    }

    if (*validate) {
      json report = json::object();
      std::string text;
      auto check = [&](const std::string& kind, const std::string& path,
                       auto&& loader) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot read " + path);
        json j;
        in >> j;
        loader(j);
        report[kind] = "ok";
        text += kind + ": ok\n";
      };
      if (!v_logic.empty())
        check("logic", v_logic, [](const json& j) { logic_from_json(j); });
      if (!v_frame.empty())
        check("frame", v_frame, [](const json& j) { frame_from_json(j); });
      if (!v_model.empty())
        check("model", v_model, [](const json& j) { model_from_json(j); });
      if (v_logic.empty() && v_frame.empty() && v_model.empty())
        throw std::invalid_argument("validate needs --logic, --frame or --model");
      finish(report, out, timer, text);
      return kExitOk;
    }
  } catch (const CipRequired& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoCip;
  } catch (const NotValidModalImplication& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.counter)
      std::cerr << "countermodel: " << model_to_json(*e.counter).dump() << "\n";
    return kExitUsage;
  } catch (const NotValidImplication& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
