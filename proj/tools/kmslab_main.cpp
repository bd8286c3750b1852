#include "kmslab/errors.hpp"
#include "kmslab/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

using namespace kmslab;
using kmslab::io::json;

namespace {

struct SessionConfig {
  std::string mode = "exact"; // exact | float
  std::uint64_t seed = 1;
  std::string format = "json"; // json | table
};

void emit(const json &doc) { std::cout << doc.dump(2) << "\n"; }

TemperatureParameter parse_q(const std::string &text) {
  Rational q = parse_rational(text);
  return TemperatureParameter(q);
}

int run(int argc, char **argv) {
  CLI::App app{"kmslab: exact KMS-state classification on finite etale groupoids"};
  app.require_subcommand(1);

  SessionConfig config;
  if (const char *env = std::getenv("KMSLAB_SEED")) config.seed = std::strtoull(env, nullptr, 10);
  app.add_option("--seed", config.seed, "deterministic seed (KMSLAB_SEED overrides)")
      ->envname("KMSLAB_SEED");
  app.add_option("--mode", config.mode, "arithmetic mode: exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--format", config.format, "output format: json or table")
      ->check(CLI::IsMember({"json", "table"}));

  // validate
  std::string g_path, c_path, q_text, state_path;
  auto *validate = app.add_subcommand("validate", "validate a groupoid (and optional cocycle)");
  validate->add_option("--groupoid", g_path, "groupoid JSON file")->required();
  std::string v_cocycle;
  validate->add_option("--cocycle", v_cocycle, "cocycle JSON file");

  // measures
  auto *measures = app.add_subcommand("measures", "quasi-invariant measure polytope");
  std::string m_g, m_c, m_q;
  measures->add_option("--groupoid", m_g)->required();
  measures->add_option("--cocycle", m_c)->required();
  measures->add_option("--q", m_q, "temperature q = e^{-beta} as a rational a/b")->required();

  // kms group
  auto *kms = app.add_subcommand("kms", "KMS-state operations");
  kms->require_subcommand(1);
  auto *kms_classify = kms->add_subcommand("classify", "extreme KMS states");
  auto *kms_check = kms->add_subcommand("check", "diagnostic for a state file");
  auto *kms_oracle = kms->add_subcommand("oracle", "brute-force linear KMS solution space");
  auto *kms_compare = kms->add_subcommand("compare", "classification vs oracle");
  for (auto *cmd : {kms_classify, kms_check, kms_oracle, kms_compare}) {
    cmd->add_option("--groupoid", g_path)->required();
    cmd->add_option("--cocycle", c_path)->required();
    cmd->add_option("--q", q_text, "temperature q as a rational a/b")->required();
  }
  kms_check->add_option("--state", state_path, "state JSON file")->required();

  // traces group
  auto *traces = app.add_subcommand("traces", "traces on crossed products");
  traces->require_subcommand(1);
  auto *tr_dec = traces->add_subcommand("decompose", "decompose trace values over periodic orbits");
  std::string sys_path, values_path;
  long cutoff = 0;
  tr_dec->add_option("--system", sys_path, "finite Z-system JSON")->required();
  tr_dec->add_option("--values", values_path, "trace values JSON")->required();
  tr_dec->add_option("--cutoff", cutoff, "Laurent cutoff M")->required();
  auto *tr_ext = traces->add_subcommand("extremal", "extreme traces of an abelian action");
  std::string grp_path, space_path, action_path;
  tr_ext->add_option("--group", grp_path, "abelian group JSON")->required();
  tr_ext->add_option("--space", space_path, "point list JSON")->required();
  tr_ext->add_option("--action", action_path, "action map JSON")->required();

  // axb
  auto *axb = app.add_subcommand("axb", "ax+b measure computations");
  axb->require_subcommand(1);
  auto *axb_report = axb->add_subcommand("report", "zeta values, measures, scaling and decay");
  std::string axb_data, axb_beta, axb_field;
  long axb_bound = 0, primes_up_to = 0;
  std::vector<int> axb_caps;
  axb_report->add_option("--data", axb_data, "ideal semigroup data JSON");
  axb_report->add_option("--beta", axb_beta, "inverse temperature as rational")->required();
  axb_report->add_option("--bound", axb_bound, "norm bound B");
  axb_report->add_option("--caps", axb_caps, "per-prime exponent caps");
  axb_report->add_option("--field", axb_field, "Q for rational-field data");
  axb_report->add_option("--primes-up-to", primes_up_to, "with --field Q: primes up to this bound");

  // algebra (element expressions)
  auto *algebra = app.add_subcommand("algebra", "evaluate convolution-algebra expressions");
  std::string expr, expr2;
  bool do_star = false, do_expect = false;
  std::string twist_q;
  double time_t_val = 0.0;
  bool has_time = false;
  algebra->add_option("--groupoid", g_path)->required();
  algebra->add_option("--expr", expr, "element literal, e.g. \"3*d(g1) + (1+2i)*d(g2)\"")
      ->required();
  algebra->add_option("--convolve", expr2, "second element literal to convolve with");
  algebra->add_flag("--star", do_star, "apply the involution");
  algebra->add_flag("--expectation", do_expect, "apply the conditional expectation");
  algebra->add_option("--twist-q", twist_q, "apply the Gibbs twist at this q (needs --cocycle)");
  algebra->add_option("--cocycle", c_path, "cocycle JSON file");
  auto *time_opt = algebra->add_option("--time", time_t_val, "apply sigma_t (float mode only)");

  CLI11_PARSE(app, argc, argv);
  has_time = time_opt->count() > 0;

  if (validate->parsed()) {
    io::GroupoidInput input = io::parse_groupoid(io::load_json_file(g_path));
    json out{{"valid", true},
             {"units", input.groupoid.unit_count()},
             {"arrows", input.groupoid.arrow_count()}};
    auto blocks = orbits(input.groupoid);
    json orbit_json = json::array();
    for (const auto &block : blocks) {
      json b = json::array();
      for (int u : block) b.push_back(input.groupoid.units[u]);
      orbit_json.push_back(b);
    }
    out["orbits"] = orbit_json;
    json iso = json::object();
    for (const auto &block : blocks)
      iso[input.groupoid.units[block.front()]] =
          isotropy_group(input.groupoid, block.front()).order();
    out["isotropy_order_at_representative"] = iso;
    if (!v_cocycle.empty()) {
      Cocycle c = io::parse_cocycle(io::load_json_file(v_cocycle), input.groupoid);
      out["cocycle_valid"] = true;
      json pot = json::object();
      auto p = cocycle_potential(input.groupoid, c);
      for (int u = 0; u < input.groupoid.unit_count(); ++u)
        pot[input.groupoid.units[u]] = p[u];
      out["potential"] = pot;
    }
    emit(out);
    return 0;
  }

  if (measures->parsed()) {
    io::GroupoidInput input = io::parse_groupoid(io::load_json_file(m_g));
    Cocycle c = io::parse_cocycle(io::load_json_file(m_c), input.groupoid);
    TemperatureParameter q = parse_q(m_q);
    MeasurePolytope poly = quasi_invariant_polytope(input.groupoid, c, q);
    emit(io::polytope_to_json(poly, input.groupoid));
    return 0;
  }

  if (kms->parsed()) {
    io::GroupoidInput input = io::parse_groupoid(io::load_json_file(g_path));
    Cocycle c = io::parse_cocycle(io::load_json_file(c_path), input.groupoid);
    TemperatureParameter q = parse_q(q_text);
    if (kms_classify->parsed()) {
      KMSClassification cls = classify(input.groupoid, c, q, config.seed);
      emit(io::classification_to_json(cls, input.groupoid));
      return 0;
    }
    if (kms_check->parsed()) {
      ExactFunctional w = io::parse_state(io::load_json_file(state_path), input.groupoid);
      if (config.mode == "float") {
        // float-lane diagnostic: linear conditions stay exact on the parsed
        // rationals, positivity switches to the eigenvalue test
        KmsDiagnostic diag = check_kms(w, c, q);
        FloatFunctional wf = FloatFunctional::zero(input.groupoid);
        for (int a = 0; a < input.groupoid.arrow_count(); ++a)
          wf.weights[a] = w.weights[a].to_complex();
        PositivityResult pos = is_positive(wf);
        diag.positive = pos.positive;
        diag.witness_positive = pos.witness;
        json out = io::diagnostic_to_json(diag);
        out["min_eigenvalue"] = pos.min_eigenvalue;
        emit(out);
        return 0;
      }
      emit(io::diagnostic_to_json(check_kms(w, c, q)));
      return 0;
    }
    if (kms_oracle->parsed()) {
      if (config.mode == "float")
        throw ExactModeUnsupported("the oracle requires exact mode");
      emit(io::oracle_to_json(oracle_solution_space(input.groupoid, c, q)));
      return 0;
    }
    KMSClassification cls = classify(input.groupoid, c, q, config.seed);
    OracleSolution oracle = oracle_solution_space(input.groupoid, c, q);
    emit(io::comparison_to_json(compare_with_oracle(cls, oracle, input.groupoid, c)));
    return 0;
  }

  if (traces->parsed()) {
    if (tr_dec->parsed()) {
      FiniteZSystem sys = io::parse_z_system(io::load_json_file(sys_path));
      auto orbits_list = periodic_orbits(sys);
      auto values =
          io::parse_trace_values(io::load_json_file(values_path), cutoff, orbits_list.size());
      TraceData data = decompose_trace(sys, values, cutoff);
      emit(io::trace_data_to_json(data));
      return 0;
    }
    FiniteGroup gamma = io::parse_group(io::load_json_file(grp_path));
    json space_doc = io::load_json_file(space_path);
    std::vector<std::string> space;
    for (const auto &p : space_doc) space.push_back(p.get<std::string>());
    json action_doc = io::load_json_file(action_path);
    json groupoid_doc{{"action", {{"group", io::load_json_file(grp_path)},
                                  {"space", space_doc},
                                  {"map", action_doc.contains("map") ? action_doc.at("map")
                                                                     : action_doc}}}};
    io::GroupoidInput input = io::parse_groupoid(groupoid_doc);
    auto triples = extremal_traces_enumerate(gamma, space, input.action, input.groupoid);
    emit(io::extremal_triples_to_json(triples, gamma, space));
    return 0;
  }

  if (axb->parsed()) {
    IdealSemigroupData data;
    if (!axb_field.empty()) {
      if (axb_field != "Q") throw SchemaError("only --field Q is built in");
      if (primes_up_to < 2) throw SchemaError("--field Q needs --primes-up-to");
      data = rational_field_data(primes_up_to);
    } else if (!axb_data.empty()) {
      data = io::parse_ideal_data(io::load_json_file(axb_data));
    } else {
      throw SchemaError("axb report needs --data or --field Q");
    }
    Rational beta = parse_rational(axb_beta);
    json out;
    out["beta"] = rational_to_string(beta);
    out["primes"] = data.primes.size();

    long n_classes = 1;
    for (long d : data.class_moduli) n_classes *= d;
    Truncation trunc;
    if (axb_bound > 0) trunc.norm_bound = axb_bound;
    if (!axb_caps.empty()) trunc.caps = axb_caps;

    if (trunc.has_norm_bound() || trunc.has_caps()) {
      // zeta per class and the class measures, when beta-1 > 1
      json zetas = json::array();
      std::vector<std::vector<long>> all_classes;
      {
        std::vector<long> tuple(data.class_moduli.size(), 0);
        while (true) {
          all_classes.push_back(tuple);
          int pos = static_cast<int>(tuple.size()) - 1;
          while (pos >= 0 && ++tuple[pos] >= data.class_moduli[pos]) tuple[pos--] = 0;
          if (pos < 0) break;
        }
        if (data.class_moduli.empty()) all_classes.assign(1, {});
      }
      for (const auto &cls : all_classes) {
        json entry{{"class", cls}};
        entry["zeta_beta_minus_1"] = io::real_value_to_json(
            partial_zeta(data, beta - 1, cls, trunc));
        zetas.push_back(std::move(entry));
      }
      out["partial_zeta"] = zetas;

      if (beta > 1) {
        json measures_json = json::array();
        for (const auto &cls : all_classes) {
          TruncatedIdealMeasure nu = nu_class_beta(data, cls, beta, trunc);
          json entry{{"class", cls}, {"measure", io::ideal_measure_to_json(nu)}};
          // scaling spot check against every trivial-class prime within reach
          json scaling = json::array();
          for (std::size_t v = 0; v < data.primes.size() && v < 4; ++v) {
            if (!data.class_is_trivial(data.class_of([&] {
                  std::vector<int> e(data.primes.size(), 0);
                  e[v] = 1;
                  return e;
                }())))
              continue;
            Ideal k{std::vector<int>(data.primes.size(), 0)};
            k.exponents[v] = 1;
            ScalingCheck sc = check_scaling(nu, k, beta);
            scaling.push_back(json{{"k", data.primes[v].label}, {"ok", sc.ok}});
          }
          entry["scaling"] = scaling;
          measures_json.push_back(std::move(entry));
        }
        out["nu_class_beta"] = measures_json;
      }
    }

    if (trunc.has_caps() && beta > 1) {
      TruncatedIdealMeasure nu = nu_beta_product(data, trunc.caps, beta);
      out["nu_beta_product"] = io::ideal_measure_to_json(nu);
    }

    if (beta > 1) {
      std::vector<int> prefixes;
      for (std::size_t p = 1; p <= data.primes.size(); p = p < 8 ? p + 1 : p * 2)
        prefixes.push_back(static_cast<int>(p));
      if (prefixes.empty() || prefixes.back() != static_cast<int>(data.primes.size()))
        prefixes.push_back(static_cast<int>(data.primes.size()));
      json decay = json::array();
      auto values = product_mass_decay(data, beta, prefixes);
      for (std::size_t i = 0; i < prefixes.size(); ++i)
        decay.push_back(json{{"primes", prefixes[i]}, {"value", io::real_value_to_json(values[i])}});
      out["product_mass_decay"] = decay;
    }
    emit(out);
    return 0;
  }

  if (algebra->parsed()) {
    io::GroupoidInput input = io::parse_groupoid(io::load_json_file(g_path));
    ExactElement f = io::parse_element_expr(expr, input.groupoid);
    if (!expr2.empty()) f = convolve(f, io::parse_element_expr(expr2, input.groupoid));
    if (do_star) f = star(f);
    if (!twist_q.empty()) {
      if (c_path.empty()) throw SchemaError("--twist-q needs --cocycle");
      Cocycle c = io::parse_cocycle(io::load_json_file(c_path), input.groupoid);
      f = gibbs_twist(f, c, parse_q(twist_q));
    }
    if (do_expect) f = conditional_expectation(f);
    if (has_time) {
      if (config.mode != "float")
        throw ExactModeUnsupported("sigma_t needs --mode float");
      if (c_path.empty()) throw SchemaError("--time needs --cocycle");
      Cocycle c = io::parse_cocycle(io::load_json_file(c_path), input.groupoid);
      FloatElement ff;
      ff.groupoid = &input.groupoid;
      for (const auto &[a, v] : f.coeffs) ff.coeffs[a] = v.to_complex();
      ff = time_action(ff, c, time_t_val);
      json coeffs = json::object();
      for (const auto &[a, v] : ff.coeffs)
        coeffs[input.groupoid.arrows[a]] = json::array({v.real(), v.imag()});
      emit(json{{"element_float", coeffs}});
      return 0;
    }
    emit(io::element_to_json(f));
    return 0;
  }

  return 2;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const SchemaError &e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
