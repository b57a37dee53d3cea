#include "sigma/cli.hpp"

#include <algorithm>
#include <functional>

#include <CLI11.hpp>

#include "sigma/json_io.hpp"
#include "sigma/text.hpp"

namespace sigma::cli {

using io::Json;

namespace {

struct Config {
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::string output;
  bool json = false;
  bool serial = false;

  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

Json header(const std::string& command) { return {{"schema", 1}, {"command", command}}; }

void merge(Json& into, const Json& from) {
  for (const auto& [key, v] : from.items()) into[key] = v;
}

Json error_doc(const std::string& kind, const std::string& message) {
  return {{"schema", 1}, {"error", {{"kind", kind}, {"message", message}}}};
}

std::vector<std::uint32_t> parse_u32_list(const std::string& s, const std::string& what) {
  std::vector<std::uint32_t> out;
  for (auto v : text::parse_uint_list(s, what)) {
    require(v <= 1'000'000, what + " entry " + std::to_string(v) + " is too large");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------- commands

Json run_classify(const std::string& tau, const std::optional<std::string>& tau2, const std::string& gamma) {
  auto a = TauSequence::parse(tau);
  auto b = TauSequence::parse(tau2.value_or(tau));
  auto g = parse_gamma(gamma);
  auto v = classify(a, b, g);
  Json j = header("classify");
  j["tau"] = a.to_string();
  j["tau2"] = b.to_string();
  j["gamma"] = gamma;
  j["i"] = {io::to_json(i_of(a)), io::to_json(i_of(b))};
  j["j"] = {io::to_json(j_of(a)), io::to_json(j_of(b))};
  j["normal_form"] = {io::to_json(normal_form(a)), io::to_json(normal_form(b))};
  j["outcome"] = to_string(v.outcome);
  j["reason"] = v.reason;
  if (!v.question.empty()) j["question"] = v.question;
  return j;
}

Json run_cb(const std::string& ks_text, const Config& cfg) {
  auto ks = parse_u32_list(ks_text, "ks");
  require(!ks.empty(), "ks must list at least one bound");
  std::uint64_t terms = 1;
  for (auto k : ks) {
    terms *= (k + 1);
    if (terms > cfg.budget) throw BudgetExceeded(terms, cfg.budget);
  }
  auto inv = cb_invariants(ks);
  std::uint64_t closed = 1;
  for (auto k : ks) closed += k;
  Json j = header("cb");
  j["ks"] = ks;
  j["index"] = inv.index;
  j["last_cardinality"] = inv.last_cardinality;
  j["closed_form_index"] = closed;
  return j;
}

struct DecomposeArgs {
  std::string kind;
  std::uint32_t m = 0, n = 0;
  Element gamma = 0;
  std::size_t depth = 6;
  std::string witnesses;
  std::size_t samples = 1000;
  std::size_t neighborhoods = 50;
};

Json run_decompose(const DecomposeArgs& a, const Config& cfg) {
  require(a.depth >= 1 && a.depth <= 64, "depth must lie in [1, 64]");
  require(a.samples <= 100'000 && a.neighborhoods <= 10'000, "too many samples requested");
  VerifyOptions opt{cfg.seed, a.samples, a.neighborhoods, cfg.exec()};
  Json j = header("decompose");
  j["kind"] = a.kind;
  Json families = Json::array();
  if (a.kind == "absorb_small") {
    require(a.n >= 1 && a.n <= 64, "n must lie in [1, 64]");
    std::vector<Element> w;
    if (a.witnesses.empty()) {
      for (Element e = 0; e < a.n; ++e) w.push_back(e);
    } else {
      for (auto v : parse_u32_list(a.witnesses, "witnesses")) w.push_back(v);
    }
    auto A = Decomposition::absorb_a(a.n, w, a.depth);
    auto B = Decomposition::absorb_b(a.m, a.n, w, a.depth);
    j["m"] = a.m;
    j["n"] = a.n;
    families.push_back(io::to_json(A, verify(A, opt)));
    families.back()["family"] = "A";
    families.push_back(io::to_json(B, verify(B, opt)));
    families.back()["family"] = "B";
  } else if (a.kind == "classif_K") {
    auto K = Decomposition::classif_k(a.gamma, a.depth);
    families.push_back(io::to_json(K, verify(K, opt)));
    families.back()["family"] = "K";
  } else {
    throw PreconditionError("unknown decomposition kind '" + a.kind + "' (absorb_small, classif_K)");
  }
  bool ok = std::all_of(families.begin(), families.end(),
                        [](const Json& f) { return f["verification"]["ok"].get<bool>(); });
  j["seed"] = cfg.seed;
  j["families"] = families;
  j["verified"] = ok;
  return j;
}

AveragingOperator operator_for(std::uint32_t k, std::uint32_t ground, const std::string& blocks,
                               const Config& cfg) {
  require(ground >= 1 && ground <= 64, "ground must lie in [1, 64]");
  if (blocks.empty()) {
    require(k >= 1 && k <= 64, "k must lie in [1, 64]");
    return build_operator(k, ground, cfg.exec(), cfg.budget);
  }
  std::vector<AveragingOperator> ops;
  for (auto b : parse_u32_list(blocks, "blocks")) {
    require(b >= 1 && b <= 64, "block sizes must lie in [1, 64]");
    ops.push_back(build_operator(b, ground, cfg.exec(), cfg.budget));
  }
  require(!ops.empty(), "blocks must list at least one size");
  return product_operator(ops, cfg.budget);
}

Json run_avg_apply(const AveragingOperator& op, const std::string& file, const Config& cfg) {
  Json input;
  try {
    input = Json::parse(io::read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("function file: ") + e.what());
  }
  require(input.is_object() && input.contains("values") && input["values"].is_array(),
          "function file needs {\"values\": [...]}");
  auto en = op.domain_enumerator(cfg.budget);
  std::vector<Rational> f(en.size(), Rational(0));
  std::vector<char> seen(en.size(), 0);
  for (const auto& item : input["values"]) {
    require(item.is_object() && item.contains("x") && item["x"].is_array() && item.contains("value") &&
                item["value"].is_string(),
            "each value needs \"x\": [points] and \"value\": \"p/q\"");
    ProductPoint x;
    for (const auto& p : item["x"]) {
      require(p.is_string(), "points are strings like \"{0}\"");
      x.prefix.push_back(Point::parse(p.get<std::string>()));
    }
    require(x.prefix.size() == op.domain_arity(),
            "x needs " + std::to_string(op.domain_arity()) + " coordinates");
    for (const auto& c : x.prefix) require(c.size() <= 1, "domain coordinates hold at most one element");
    for (const auto& c : x.prefix)
      for (auto e : c.elements()) require(e < op.ground, "element " + std::to_string(e) + " outside the ground");
    auto idx = en.index_of(x.normalized());
    require(!seen[idx], "x = " + x.to_string() + " given twice");
    seen[idx] = 1;
    f[idx] = io::parse_rational(item["value"].get<std::string>());
  }
  auto Tf = op.apply(f, cfg.exec());
  Json j = header("avg apply");
  Json values = Json::array();
  for (std::size_t r = 0; r < Tf.size(); ++r) {
    const auto& y = op.codomain[r];
    values.push_back({{"y", op.blocks.size() == 1 ? y.coordinate(0).to_string() : y.to_string()},
                      {"value", io::rational_string(Tf[r])}});
  }
  j["values"] = values;
  return j;
}

Json run_uec_preimage(const std::string& target, std::uint32_t N, std::size_t max, const Config& cfg) {
  auto t = io::parse_rational(target);
  auto res = phi_preimage(t, N, cfg.exec(), cfg.budget);
  Json j = header("uec preimage");
  j["target"] = io::rational_string(t);
  j["N"] = N;
  j["tolerance"] = io::rational_string(truncation_tail(N));
  j["exhaustive"] = res.exhaustive;
  j["count"] = res.solutions.size();
  Json sols = Json::array();
  for (std::size_t s = 0; s < res.solutions.size() && s < max; ++s) {
    sols.push_back({{"bits", io::bits_string(res.solutions[s])},
                    {"phi", io::rational_string(phi(res.solutions[s], N))}});
  }
  j["solutions"] = sols;
  j["truncated"] = res.solutions.size() > max;
  return j;
}

Json run_ds_extract(const std::string& file, std::size_t petals, bool any_size) {
  auto fam = SetFamily::parse(io::read_file(file));
  auto res = extract_delta_system(fam, petals, !any_size);
  Json j = header("ds extract");
  j["members"] = fam.members.size();
  j["petals_requested"] = petals;
  merge(j, io::to_json(res));
  if (res.best.petal_size) {
    auto s = static_cast<std::uint32_t>(*res.best.petal_size);
    if (s <= 8 && petals <= 64) j["erdos_rado_bound"] = erdos_rado_bound(s, static_cast<std::uint32_t>(petals));
  }
  return j;
}

Json run_clopen(const std::string& action, const std::string& box_text, std::optional<std::uint32_t> k,
                const Config& cfg) {
  auto box = BasicBox::parse(box_text);
  Json j = header("clopen " + action);
  j["box"] = box.to_string();
  if (action == "empty") {
    j["empty"] = box_is_empty(box);
  } else if (action == "reduce") {
    j["reduction"] = io::to_json(box_reduce(box));
  } else {
    require(box.ambient.factors.size() == 1 && !box.ambient.omega_tail,
            "preimage expects a box over a single factor sigma_k");
    const auto kk = k.value_or(box.ambient.factors[0].n);
    require(kk >= 1 && kk <= 16, "k must lie in [1, 16]");
    auto pre = preimage_under_union(box, kk);
    if (pre.boxes.size() > cfg.budget) throw BudgetExceeded(pre.boxes.size(), cfg.budget);
    j["k"] = kk;
    j["preimage"] = io::to_json(pre);
  }
  return j;
}

}  // namespace

Result dispatch(const std::vector<std::string>& args) {
  Result result;
  Json out;
  Config cfg;
  cfg.budget = budget_from_env();

  CLI::App app{"Spaces of finite sets: averaging operators, encodings, decompositions, classification",
               "sigma"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "seed for sampled verifications");
  app.add_option("--output", cfg.output, "write the JSON document to this path");
  app.add_option("--budget", cfg.budget, "maximum enumeration size")->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.json, "JSON output (the only mode)");
  app.add_flag("--serial", cfg.serial, "disable the parallel kernels");

  std::function<Json()> action;

  // classify
  std::string tau, gamma = "uncountable";
  std::optional<std::string> tau2;
  auto* classify_cmd = app.add_subcommand("classify", "decide whether sigma_tau and sigma_tau2 are homeomorphic");
  classify_cmd->add_option("--tau", tau, "e.g. \"w,w,2 tail=0\"")->required();
  classify_cmd->add_option("--tau2", tau2, "defaults to --tau");
  classify_cmd->add_option("--gamma", gamma, "uncountable or countable");
  classify_cmd->callback([&] { action = [&] { return run_classify(tau, tau2, gamma); }; });

  // cb
  std::string ks;
  auto* cb_cmd = app.add_subcommand("cb", "Cantor-Bendixson invariants of prod sigma_{k_i}(w)");
  cb_cmd->add_option("--ks", ks, "comma list, e.g. 2,3")->required();
  cb_cmd->callback([&] { action = [&] { return run_cb(ks, cfg); }; });

  // decompose
  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "clopen decomposition around a limit point, verified");
  dec_cmd->add_option("--kind", dec.kind, "absorb_small or classif_K")->required();
  dec_cmd->add_option("--m", dec.m);
  dec_cmd->add_option("--n", dec.n);
  dec_cmd->add_option("--gamma", dec.gamma, "element for classif_K");
  dec_cmd->add_option("--depth", dec.depth);
  dec_cmd->add_option("--witnesses", dec.witnesses, "comma list of n distinct elements");
  dec_cmd->add_option("--samples", dec.samples);
  dec_cmd->add_option("--neighborhoods", dec.neighborhoods);
  dec_cmd->callback([&] { action = [&] { return run_decompose(dec, cfg); }; });

  // avg
  std::uint32_t avg_k = 0, avg_ground = 0;
  std::string avg_blocks, avg_f;
  auto* avg_cmd = app.add_subcommand("avg", "averaging operator of the union map");
  avg_cmd->require_subcommand(1);
  auto add_operator_options = [&](CLI::App* c) {
    c->add_option("--k", avg_k, "arity of the union map");
    c->add_option("--blocks", avg_blocks, "comma list of arities for a product operator");
    c->add_option("--ground", avg_ground, "ground set size")->required();
  };
  auto* avg_build = avg_cmd->add_subcommand("build", "export the operator rows");
  add_operator_options(avg_build);
  avg_build->callback([&] {
    action = [&] {
      Json j = header("avg build");
      merge(j, io::to_json(operator_for(avg_k, avg_ground, avg_blocks, cfg)));
      return j;
    };
  });
  auto* avg_check = avg_cmd->add_subcommand("check", "verify T(1)=1, positivity and T(g o p)=g exactly");
  add_operator_options(avg_check);
  avg_check->callback([&] {
    action = [&] {
      auto op = operator_for(avg_k, avg_ground, avg_blocks, cfg);
      auto rep = check_axioms(op, cfg.exec(), cfg.budget);
      Json j = header("avg check");
      merge(j, io::to_json(rep));
      if (op.blocks.size() == 1) j["rows_match_L"] = rows_match_L(op);
      return j;
    };
  });
  auto* avg_apply = avg_cmd->add_subcommand("apply", "apply T to a function given in a JSON file");
  add_operator_options(avg_apply);
  avg_apply->add_option("--f", avg_f, "JSON {\"values\":[{\"x\":[\"{0}\",\"{}\"],\"value\":\"1/2\"}]}")->required();
  avg_apply->callback([&] {
    action = [&] { return run_avg_apply(operator_for(avg_k, avg_ground, avg_blocks, cfg), avg_f, cfg); };
  });

  // uec
  std::string bits, target, file;
  std::uint32_t uec_N = 0, levels = 0;
  std::size_t max_solutions = 64;
  auto* uec_cmd = app.add_subcommand("uec", "encoding chain for uniform Eberlein compacta");
  uec_cmd->require_subcommand(1);
  auto* uec_phi = uec_cmd->add_subcommand("phi", "phi_N of a bit vector");
  uec_phi->add_option("--bits", bits, "e.g. 1,0,1")->required();
  uec_phi->add_option("--N", uec_N, "truncation, default = number of bits")->check(CLI::PositiveNumber);
  uec_phi->callback([&] {
    action = [&] {
      auto b = io::parse_bits(bits);
      auto N = uec_N ? uec_N : static_cast<std::uint32_t>(b.size());
      require(N >= 1 && N <= 4096, "truncation N must lie in [1, 4096]");
      Json j = header("uec phi");
      j["bits"] = io::bits_string(b);
      j["N"] = N;
      j["value"] = io::rational_string(phi(b, N));
      return j;
    };
  });
  auto* uec_pre = uec_cmd->add_subcommand("preimage", "all bit vectors within (2/3)^N of a target");
  uec_pre->add_option("--target", target, "rational in [0,1]")->required();
  uec_pre->add_option("--N", uec_N)->required();
  uec_pre->add_option("--max", max_solutions, "solutions listed in the output");
  uec_pre->callback([&] { action = [&] { return run_uec_preimage(target, uec_N, max_solutions, cfg); }; });
  auto* uec_l0 = uec_cmd->add_subcommand("l0", "membership in L0 with the exact certificate");
  uec_l0->add_option("--bits-file", file, "lines 'element: {levels}'")->required();
  uec_l0->callback([&] {
    action = [&] {
      auto x = io::parse_binary_array(io::read_file(file));
      auto v = in_L0(x);
      Json j = header("uec l0");
      Json counts = Json::object();
      for (const auto& [l, c] : support_counts(x)) counts[std::to_string(l)] = c;
      j["counts"] = counts;
      j["sum"] = io::rational_string(v.sum);
      j["member"] = v.member;
      return j;
    };
  });
  auto* uec_bounds = uec_cmd->add_subcommand("bounds", "weights r_n and bounds M_n");
  uec_bounds->add_option("--levels", levels)->required();
  uec_bounds->callback([&] {
    action = [&] {
      require(levels >= 1 && levels <= 4096, "levels must lie in [1, 4096]");
      Json j = header("uec bounds");
      merge(j, io::to_json(level_bounds(levels)));
      return j;
    };
  });
  auto* uec_pipe = uec_cmd->add_subcommand("pipeline", "witness log for a finite K in B+");
  uec_pipe->add_option("--points", file, "one point per line, 'element:value, ...'")->required();
  uec_pipe->add_option("--N", uec_N)->required();
  uec_pipe->callback([&] {
    action = [&] {
      Json j = header("uec pipeline");
      auto rep = pipeline_check(io::parse_points(io::read_file(file)), uec_N);
      merge(j, io::to_json(rep));
      return j;
    };
  });

  // ds
  std::size_t petals = 3;
  bool any_size = false;
  std::uint32_t ds_n = 0, ds_k = 1;
  auto* ds_cmd = app.add_subcommand("ds", "Delta-systems and the common-point witness");
  ds_cmd->require_subcommand(1);
  auto* ds_extract = ds_cmd->add_subcommand("extract", "largest Delta-system of a set family");
  ds_extract->add_option("--family", file, "lines 'label: {e1,e2}'")->required();
  ds_extract->add_option("--petals", petals);
  ds_extract->add_flag("--any-size", any_size, "allow petals of different cardinalities");
  ds_extract->callback([&] { action = [&] { return run_ds_extract(file, petals, any_size); }; });
  auto* ds_witness = ds_cmd->add_subcommand("witness", "common point of B_lambda0 and the B'_mu, mu in F");
  ds_witness->add_option("--spec", file, "lines 'label: G={..},{..} H={..},{..}'")->required();
  ds_witness->add_option("--n", ds_n)->required();
  ds_witness->add_option("--k", ds_k)->required();
  ds_witness->callback([&] {
    action = [&] {
      require(ds_n <= 64 && ds_k <= 64, "n and k must be at most 64");
      auto spec = NeighborhoodSpec::parse(io::read_file(file));
      Json j = header("ds witness");
      merge(j, io::to_json(common_point_witness(spec, ds_n, ds_k, cfg.exec(), cfg.budget)));
      return j;
    };
  });

  // clopen
  std::string box_text;
  std::optional<std::uint32_t> clopen_k;
  auto* clopen_cmd = app.add_subcommand("clopen", "basic clopen boxes");
  clopen_cmd->require_subcommand(1);
  for (const char* name : {"empty", "reduce", "preimage"}) {
    auto* c = clopen_cmd->add_subcommand(name);
    c->add_option("--box", box_text, "e.g. \"[0: F={1} G={2}] @ 3\"")->required();
    if (std::string(name) == "preimage") c->add_option("--k", clopen_k);
    c->callback([&, action_name = std::string(name)] {
      action = [&, action_name] { return run_clopen(action_name, box_text, clopen_k, cfg); };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    require(static_cast<bool>(action), "no command given");
    out = action();
    result.exit_code = 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out = header("help");
      out["help"] = app.help();
    } else {
      out = error_doc("usage", e.what());
      result.exit_code = 1;
    }
  } catch (const BudgetExceeded& e) {
    out = error_doc("budget", e.what());
    result.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    out = error_doc("precondition", e.what());
    result.exit_code = 1;
  } catch (const std::bad_alloc&) {
    out = error_doc("budget", "out of memory");
    result.exit_code = 2;
  } catch (const std::exception& e) {
    out = error_doc("internal", e.what());
    result.exit_code = 3;
  }
  result.output_path = cfg.output;
  result.text = out.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
  return result;
}

}  // namespace sigma::cli
