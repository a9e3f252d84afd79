#include "hplab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hplab/acceptance.hpp"
#include "hplab/hankel.hpp"
#include "hplab/report.hpp"

namespace hplab {

namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"gram",      "h1",         "hannorm",    "dk",
                                            "pick",      "thmc1",      "interpseq",  "example316",
                                            "example317", "selftest",  "plot"};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string output;

  // kernel
  std::string kernel = "szego";
  int d = 0;
  std::string points;
  std::string gram;
  std::string input;
  int basepoint = -1;

  // h1 / hannorm / dk
  std::string values;
  std::string symbol;
  double tol = 1e-6;
  int max_iter = 20000;
  bool certificate = false;
  int bruteforce = 0;
  int probes = 0;
  int i = -1;
  int j = -1;

  // thmc1
  std::vector<double> radii;
  std::vector<double> p = {1, 2};

  // sequences
  std::string sequence = "geometric";
  double ratio = 0.5;
  std::vector<std::size_t> n;
  double decay = 4;
  double delta_min = kDefaultDeltaMin;
  double c_max = kDefaultCarlesonMax;
  std::string rule = "doubleexp";
  int jmin = -1;
  int jmax = 9;

  // selftest / plot
  std::vector<std::string> only;
  double tighten = 1;
  std::string kind;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in " + what + ": " + e.what());
  }
}

/// "[a],[b]" and "[[a],[b]]" both give the array [[a],[b]].
json parse_list(const std::string& text, const std::string& what) {
  try {
    json j = json::parse(text);
    if (j.is_array() && !j.empty() &&
        std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_array(); })) {
      return j;
    }
  } catch (const json::exception&) {
  }
  json j = parse_json("[" + text + "]", what);
  return j;
}

Complex to_complex(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_array() && v.size() == 1 && v[0].is_number()) return {v[0].get<double>(), 0.0};
  throw InputError(what + ": expected a number or [re, im]");
}

MatrixXc to_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("gram: expected a nonempty array of rows");
  const auto n = Eigen::Index(j.size());
  MatrixXc K(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[std::size_t(r)];
    if (!row.is_array() || Eigen::Index(row.size()) != n) throw InputError("gram: matrix is not square");
    for (Eigen::Index c = 0; c < n; ++c) K(r, c) = to_complex(row[std::size_t(c)], "gram entry");
  }
  return K;
}

struct Problem {
  KernelModel model;
  PointSet points;
};

Problem kernel_from_doc(const json& doc) {
  if (!doc.is_object()) throw InputError("kernel document must be an object");
  const std::string kind = doc.value("kernel", std::string("szego"));
  if (kind == "gram") {
    if (!doc.contains("gram")) throw InputError("kernel 'gram' needs a \"gram\" matrix");
    MatrixXc K = to_matrix(doc["gram"]);
    const auto n = std::size_t(K.rows());
    Problem p{KernelModel(ExplicitGram{std::move(K)}), PointSet::abstract(n)};
    if (doc.contains("basepoint")) {
      p.model = normalize(p.model, p.points[doc["basepoint"].get<std::size_t>()]);
    }
    return p;
  }
  if (!doc.contains("points") || !doc["points"].is_array() || doc["points"].empty()) {
    throw InputError("kernel '" + kind + "' needs a nonempty \"points\" list");
  }
  const json& pts = doc["points"];
  std::optional<Problem> p;
  if (kind == "szego") {
    std::vector<Complex> zs;
    for (const auto& q : pts) zs.push_back(to_complex(q, "disc point"));
    p = Problem{KernelModel(Szego{}), PointSet::disc(zs)};
  } else if (kind == "da") {
    int d = doc.value("d", 0);
    std::vector<VectorXc> vs;
    for (const auto& q : pts) {
      if (!q.is_array() || q.empty()) throw InputError("ball point must be a coordinate list");
      VectorXc v(Eigen::Index(q.size()));
      for (std::size_t k = 0; k < q.size(); ++k) v(Eigen::Index(k)) = to_complex(q[k], "ball coordinate");
      if (d == 0) d = int(v.size());
      if (v.size() != d) throw InputError("ball point dimension does not match d");
      vs.push_back(std::move(v));
    }
    p = Problem{KernelModel(DruryArveson{d}), PointSet::ball(vs)};
  } else {
    throw InputError("unknown kernel '" + kind + "' (szego, da, gram)");
  }
  if (doc.contains("basepoint")) {
    const auto b = doc["basepoint"].get<std::size_t>();
    if (b >= p->points.size()) throw InputError("basepoint index out of range");
    p->model = normalize(p->model, p->points[b]);
  }
  return *p;
}

Problem kernel_from(const Options& o) {
  json doc;
  if (!o.input.empty()) {
    doc = parse_json(read_file(o.input), o.input);
  } else {
    doc["kernel"] = o.kernel;
    if (o.d > 0) doc["d"] = o.d;
    if (!o.points.empty()) doc["points"] = parse_list(o.points, "--points");
    if (!o.gram.empty()) doc["gram"] = parse_json(o.gram, "--gram");
    if (o.basepoint >= 0) doc["basepoint"] = o.basepoint;
  }
  return kernel_from_doc(doc);
}

FuncValues function_from(const std::string& spec, const Gram& g, const std::string& what) {
  if (spec.empty()) throw InputError(what + " is required");
  auto index = [&](const std::string& s) {
    const int i = std::stoi(s);
    if (i < 0 || i >= g.size()) throw InputError(what + ": point index out of range");
    return Eigen::Index(i);
  };
  if (spec.rfind("kx:", 0) == 0) return g.column(index(spec.substr(3)));
  if (spec.rfind("bx:", 0) == 0) return normalized_kernel(g, index(spec.substr(3)));
  json j;
  try {
    j = json::parse(spec);
    if (!j.is_array()) j = json::array({j});
  } catch (const json::exception&) {
    j = parse_json("[" + spec + "]", what);
  }
  if (Eigen::Index(j.size()) != g.size()) {
    throw InputError(what + " has " + std::to_string(j.size()) + " values for " +
                     std::to_string(g.size()) + " points");
  }
  FuncValues f(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) f(i) = to_complex(j[std::size_t(i)], what);
  return f;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

GrowthRule parse_rule(const std::string& s) {
  if (s == "doubleexp") return GrowthRule::DoubleExp;
  if (s == "factorialsq") return GrowthRule::FactorialSq;
  throw InputError("unknown rule '" + s + "' (doubleexp, factorialsq)");
}

/// What a command produced, before formatting.
struct Artifact {
  std::optional<json> object;
  std::optional<Table> table;
  std::optional<PlotKind> plot_kind;
  std::string text;
  int exit_code = 0;
};

Artifact table_artifact(Table t, std::optional<PlotKind> kind) {
  Artifact a;
  a.table = std::move(t);
  a.plot_kind = kind;
  return a;
}

Artifact cmd_gram(const Options& o) {
  const auto pr = kernel_from(o);
  const Gram g = gram(pr.model, pr.points);
  const auto eig = herm_eig(HermMatrix(g.K()));
  Artifact a;
  json K = json::array();
  for (Eigen::Index r = 0; r < g.size(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < g.size(); ++c) row.push_back(complex_json(g(r, c)));
    K.push_back(row);
  }
  json ev = json::array();
  Table t;
  t.columns = {"index", "eigenvalue"};
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    ev.push_back(eig.eigenvalues(k));
    t.add_row({(long long)k, eig.eigenvalues(k)});
  }
  a.object = json{{"kernel", pr.model.name()},
                  {"n", g.size()},
                  {"condition_number", g.condition_number()},
                  {"K", K},
                  {"eigenvalues", ev}};
  a.table = t;
  a.plot_kind = PlotKind::Spectrum;
  return a;
}

Artifact cmd_h1(const Options& o) {
  const auto pr = kernel_from(o);
  const Gram g = gram(pr.model, pr.points);
  const H1Problem prob(g, function_from(o.values, g, "--values"));
  Artifact a;
  if (o.bruteforce > 0) {
    NormEstimate e;
    e.value = e.upper = h1_norm_bruteforce(prob, o.bruteforce, 50, *o.seed);
    e.lower = 0;
    e.method = "bruteforce";
    a.object = to_json(e);
    return a;
  }
  H1SolverOptions opts;
  opts.tolerance = o.tol;
  opts.max_iterations = o.max_iter;
  const auto est = h1_norm(prob, opts);
  if (!est.converged) {
    a.object = json{{"error", "not_converged"}, {"estimate", to_json(est)}};
    a.exit_code = 1;
    return a;
  }
  if (o.certificate) {
    a.object = json{{"estimate", to_json(est)}, {"certificate", to_json(h1_certificate(prob, opts))}};
  } else {
    a.object = to_json(est);
  }
  return a;
}

Artifact cmd_hannorm(const Options& o) {
  const auto pr = kernel_from(o);
  const Gram g = gram(pr.model, pr.points);
  const FuncValues b = function_from(o.symbol, g, "--symbol");
  NormEstimate e;
  e.value = e.upper = e.lower = han_norm(g, b);
  e.method = "svd";
  if (o.probes > 0) {
    DualProbeOptions opts;
    opts.seed = *o.seed;
    e.lower = han_norm_dual(g, b, o.probes, opts);
    e.gap = e.upper > 0 ? (e.upper - e.lower) / e.upper : 0.0;
    e.method = "svd+dual";
  }
  Artifact a;
  a.object = to_json(e);
  return a;
}

Artifact cmd_dk(const Options& o) {
  const auto pr = kernel_from(o);
  const Gram g = gram(pr.model, pr.points);
  Artifact a;
  if (o.i >= 0 || o.j >= 0) {
    if (o.i < 0 || o.j < 0 || o.i >= g.size() || o.j >= g.size()) {
      throw InputError("--i and --j must both be valid point indices");
    }
    a.object = json{{"i", o.i},
                    {"j", o.j},
                    {"dk", dk(g, o.i, o.j)},
                    {"projection_norm", projection_diff_norm(g, o.i, o.j)},
                    {"omega", complex_json(omega_phase(g, o.i, o.j))}};
    return a;
  }
  Table t;
  t.columns = {"i", "j", "dk", "projection_norm"};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = i + 1; j < g.size(); ++j) {
      t.add_row({(long long)i, (long long)j, dk(g, i, j), projection_diff_norm(g, i, j)});
    }
  }
  return table_artifact(t, std::nullopt);
}

Artifact cmd_pick(const Options& o) {
  const auto pr = kernel_from(o);
  const Gram g = gram(pr.model, pr.points);
  const auto b = pick_embedding(g);
  Table t;
  t.columns = {"i", "k", "re", "im"};
  json vs = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    json v = json::array();
    for (Eigen::Index k = 0; k < b[i].size(); ++k) {
      v.push_back(complex_json(b[i](k)));
      t.add_row({(long long)i, (long long)k, b[i](k).real(), b[i](k).imag()});
    }
    vs.push_back(v);
  }
  Artifact a;
  a.object = json{{"kernel", pr.model.name()}, {"dimension", b.empty() ? 0 : b[0].size()}, {"b", vs}};
  a.table = t;
  return a;
}

Artifact cmd_thmc1(const Options& o) {
  if (o.radii.empty()) throw InputError("--radii is required");
  std::optional<KernelModel> model;
  std::vector<Point> xs;
  if (o.kernel == "szego") {
    model = KernelModel(Szego{});
    for (double r : o.radii) xs.push_back(DiscPoint{Complex(r)});
  } else if (o.kernel == "da") {
    const int d = o.d > 0 ? o.d : 2;
    model = KernelModel(DruryArveson{d});
    for (double r : o.radii) {
      VectorXc v = VectorXc::Zero(d);
      v(0) = r;
      xs.push_back(BallPoint{v});
    }
  } else {
    throw InputError("thmc1 supports --kernel szego or da");
  }
  for (const auto& x : xs) PointSet({x});  // validates radii
  std::vector<PExponent> ps;
  for (double p : o.p) ps.push_back(PExponent::from_p(p));
  return table_artifact(thmc1_table(thmc1_report(*model, xs, ps)), PlotKind::RatioVsLogK);
}

Artifact cmd_interpseq(const Options& o) {
  std::vector<std::size_t> ns = o.n.empty() ? std::vector<std::size_t>{10} : o.n;
  Table t;
  t.columns = {"N", "delta", "carleson", "max_dual_norm", "verdict"};
  json arr = json::array();
  for (std::size_t n : ns) {
    SequenceSpec spec;
    spec.truncation = n;
    if (o.sequence == "geometric") {
      spec.generator = DiscGeometric{o.ratio};
    } else if (o.sequence == "harmonic") {
      spec.generator = DiscHarmonic{};
    } else if (o.sequence == "orthogonal") {
      spec.generator = Example316{{}, o.decay};
    } else if (o.sequence == "custom") {
      std::vector<Complex> zs;
      for (const auto& q : parse_list(o.points, "--points")) zs.push_back(to_complex(q, "disc point"));
      spec.generator = DiscCustom{zs};
    } else {
      throw InputError("unknown sequence '" + o.sequence + "' (geometric, harmonic, orthogonal, custom)");
    }
    const auto seq = generate(spec);
    const auto cert = is_interpolating(seq.model, seq.points, o.delta_min, o.c_max);
    const double worst = cert.dual_norms.empty()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : *std::max_element(cert.dual_norms.begin(), cert.dual_norms.end());
    t.add_row({(long long)n, cert.delta, cert.carleson, worst, to_string(cert.verdict)});
    json row = to_json(cert);
    row["N"] = n;
    arr.push_back(row);
  }
  Artifact a;
  a.object = arr;
  a.table = t;
  return a;
}

Artifact cmd_example316(const Options& o) {
  std::vector<std::size_t> ns = o.n.empty() ? std::vector<std::size_t>{10, 20} : o.n;
  const std::size_t most = *std::max_element(ns.begin(), ns.end());
  const auto radii = example316_radii(Example316{{}, o.decay}, most);
  Table t;
  t.columns = {"N", "sup", "closed_form"};
  for (std::size_t n : ns) {
    t.add_row({(long long)n, example316_sup(radii, n), example316_closed_form(radii, n)});
  }
  return table_artifact(t, std::nullopt);
}

Artifact cmd_example317(const Options& o) {
  const GrowthRule rule = parse_rule(o.rule);
  const int jmin = o.jmin >= 0 ? o.jmin : first_index(rule) + 1;
  if (o.jmax < jmin) throw InputError("--jmax must be >= --jmin");
  std::vector<Example317Ratio> rows;
  for (int j = jmin; j <= o.jmax; ++j) rows.push_back(example317_ratio(rule, j));
  return table_artifact(example317_table(rows), PlotKind::Decay);
}

Artifact cmd_selftest(const Options& o) {
  AcceptanceOptions opts;
  opts.seed = *o.seed;
  opts.tighten = o.tighten;
  opts.only = o.only;
  Artifact a;
  a.text = "seed " + std::to_string(opts.seed) + "\n";
  int failed = 0;
  for (const auto& r : run_acceptance(opts)) {
    a.text += format_result(r) + "\n";
    failed += r.pass ? 0 : 1;
  }
  a.text += failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n";
  a.exit_code = failed ? 1 : 0;
  return a;
}

Artifact cmd_plot(const Options& o) {
  if (o.input.empty()) throw InputError("--input table.csv is required");
  if (o.kind.empty()) throw InputError("--kind is required");
  Artifact a;
  a.text = plot(parse_csv(read_file(o.input)), parse_plot_kind(o.kind));
  return a;
}

std::string render(const Artifact& a, const std::string& format) {
  if (!a.text.empty()) {
    if (!format.empty() && format != (a.text.rfind("<?xml", 0) == 0 ? "svg" : "text")) {
      throw InputError("--format " + format + " is not available for this command");
    }
    return a.text;
  }
  const std::string f = format.empty() ? (a.object ? "json" : "csv") : format;
  if (f == "json") {
    if (a.object) return a.object->dump(2) + "\n";
    return to_json(*a.table).dump(2) + "\n";
  }
  if (f == "csv") {
    if (!a.table) throw InputError("--format csv is not available for this command");
    return to_csv(*a.table);
  }
  if (f == "svg") {
    if (!a.table || !a.plot_kind) throw InputError("--format svg is not available for this command");
    return plot(*a.table, *a.plot_kind);
  }
  throw InputError("unknown format '" + f + "' (json, csv, svg)");
}

std::string scalar_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw InputError("config value must be a scalar or a list of scalars");
}

/// Turns a config object into option tokens placed ahead of the command line.
std::vector<std::string> config_tokens(const json& cfg, std::optional<std::uint64_t>& seed) {
  std::vector<std::string> out;
  auto flag = [](std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
  };
  for (const auto& [key, v] : cfg.items()) {
    if (key == "command") continue;
    if (key == "seed") {
      if (!v.is_number_unsigned()) throw InputError("config seed must be a non-negative integer");
      seed = v.get<std::uint64_t>();
      continue;
    }
    if (key == "kernel" && v.is_object()) {
      const auto pr = kernel_from_doc(v);  // validate early
      (void)pr;
      if (v.contains("kernel")) out.push_back("--kernel=" + v["kernel"].get<std::string>());
      if (v.contains("d")) out.push_back("--d=" + scalar_token(v["d"]));
      if (v.contains("points")) out.push_back("--points=" + v["points"].dump());
      if (v.contains("gram")) out.push_back("--gram=" + v["gram"].dump());
      if (v.contains("basepoint")) out.push_back("--basepoint=" + scalar_token(v["basepoint"]));
      continue;
    }
    if (key == "output" && v.is_object()) {
      if (v.contains("path")) out.push_back("--output=" + v["path"].get<std::string>());
      if (v.contains("format")) out.push_back("--format=" + v["format"].get<std::string>());
      continue;
    }
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag(key));
    } else if (v.is_array()) {
      std::string joined;
      bool nested = false;
      for (const auto& e : v) nested = nested || e.is_structured();
      if (nested) {
        joined = v.dump();
      } else {
        for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar_token(e);
      }
      out.push_back(flag(key) + "=" + joined);
    } else if (v.is_object()) {
      out.push_back(flag(key) + "=" + v.dump());
    } else {
      out.push_back(flag(key) + "=" + scalar_token(v));
    }
  }
  return out;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("HPLAB_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != std::string(s).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("HPLAB_SEED is not an unsigned integer: ") + s);
  }
}

void add_kernel_options(CLI::App* sub, Options& o) {
  sub->add_option("--kernel", o.kernel, "szego | da | gram");
  sub->add_option("--d", o.d, "ball dimension for da");
  sub->add_option("--points", o.points, "e.g. \"[0.0],[0.5,0.1]\" (disc) or \"[[0.1,0.2]]\" (ball)");
  sub->add_option("--gram", o.gram, "explicit Gram as JSON rows; entries x or [re,im]");
  sub->add_option("--input", o.input, "kernel document (JSON)");
  sub->add_option("--basepoint", o.basepoint, "normalize at this point index");
}

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--seed", o.seed, "random seed (default 20240501, or HPLAB_SEED)");
  sub->add_option("--format", o.format, "json | csv | svg");
  sub->add_option("--output", o.output, "write the artifact here instead of stdout");
}

int run_checked(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Locate --config before parsing so its contents can feed the parser.
  std::string config_path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) config_path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) config_path = args[k].substr(9);
  }
  std::vector<std::string> tokens;
  std::optional<std::uint64_t> config_seed;
  std::vector<std::string> rest = args;
  std::string command;
  if (!rest.empty() && std::find(kCommands.begin(), kCommands.end(), rest.front()) != kCommands.end()) {
    command = rest.front();
    rest.erase(rest.begin());
  }
  std::vector<std::string> from_config;
  if (!config_path.empty()) {
    const json cfg = parse_json(read_file(config_path), config_path);
    if (!cfg.is_object()) throw InputError("config must be a JSON object");
    if (command.empty() && cfg.contains("command")) command = cfg["command"].get<std::string>();
    from_config = config_tokens(cfg, config_seed);
  }
  if (!command.empty()) tokens.push_back(command);
  tokens.insert(tokens.end(), from_config.begin(), from_config.end());
  tokens.insert(tokens.end(), rest.begin(), rest.end());

  Options o;
  CLI::App app{"hplab: weak products, Hankel forms and interpolating sequences on finite point sets",
               "hplab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* gram_cmd = app.add_subcommand("gram", "Gram matrix, condition number and spectrum");
  auto* h1_cmd = app.add_subcommand("h1", "weak product norm of a function");
  auto* han_cmd = app.add_subcommand("hannorm", "Hankel norm of a symbol");
  auto* dk_cmd = app.add_subcommand("dk", "pseudo-metric d_k");
  auto* pick_cmd = app.add_subcommand("pick", "Drury-Arveson embedding b(x)");
  auto* thm_cmd = app.add_subcommand("thmc1", "pointwise H^p bounds on a radial grid");
  auto* seq_cmd = app.add_subcommand("interpseq", "interpolating-sequence certificate");
  auto* e316 = app.add_subcommand("example316", "orthogonal-point kernel: sup of the column sums");
  auto* e317 = app.add_subcommand("example317", "growth-sequence ratio decay");
  auto* self = app.add_subcommand("selftest", "seeded acceptance battery");
  auto* plot_cmd = app.add_subcommand("plot", "SVG plot of a CSV table");

  for (auto* s : {gram_cmd, h1_cmd, han_cmd, dk_cmd, pick_cmd}) add_kernel_options(s, o);
  for (auto* s : app.get_subcommands({})) add_output_options(s, o);

  h1_cmd->add_option("--values", o.values, "kx:i, bx:i or a value list")->required();
  h1_cmd->add_option("--tol", o.tol, "relative primal-dual gap");
  h1_cmd->add_option("--max-iter", o.max_iter);
  h1_cmd->add_flag("--certificate", o.certificate, "include the factorization");
  h1_cmd->add_option("--bruteforce", o.bruteforce, "use the local-descent oracle with this rank");
  han_cmd->add_option("--symbol", o.symbol, "kx:i, bx:i or a value list")->required();
  han_cmd->add_option("--probes", o.probes, "also compute the H^1 duality lower bound");
  dk_cmd->add_option("--i", o.i);
  dk_cmd->add_option("--j", o.j);

  thm_cmd->add_option("--kernel", o.kernel, "szego | da");
  thm_cmd->add_option("--d", o.d);
  thm_cmd->add_option("--radii", o.radii)->delimiter(',')->required();
  thm_cmd->add_option("--p", o.p)->delimiter(',');

  seq_cmd->add_option("--sequence", o.sequence, "geometric | harmonic | orthogonal | custom");
  seq_cmd->add_option("--ratio", o.ratio);
  seq_cmd->add_option("--n", o.n, "truncations")->delimiter(',');
  seq_cmd->add_option("--points", o.points);
  seq_cmd->add_option("--decay", o.decay);
  seq_cmd->add_option("--delta-min", o.delta_min);
  seq_cmd->add_option("--c-max", o.c_max);

  e316->add_option("--decay", o.decay, "1 - r_n^2 = decay^-n");
  e316->add_option("--n", o.n, "truncations")->delimiter(',');

  e317->add_option("--rule", o.rule, "doubleexp | factorialsq");
  e317->add_option("--jmin", o.jmin);
  e317->add_option("--jmax", o.jmax);

  self->add_option("--only", o.only, "criterion names or numbers")->delimiter(',');
  self->add_option("--tighten", o.tighten, "divide every tolerance by this factor");

  plot_cmd->add_option("--input", o.input, "CSV table")->required();
  plot_cmd->add_option("--kind", o.kind, "ratio_vs_logk | decay | spectrum")->required();

  try {
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hplab: " << e.what() << "\n";
    return 2;
  }

  if (!o.seed) o.seed = env_seed();
  if (!o.seed) o.seed = config_seed;
  if (!o.seed) o.seed = kDefaultSeed;

  const std::string name = app.get_subcommands().front()->get_name();
  static const std::map<std::string, Artifact (*)(const Options&)> dispatch = {
      {"gram", cmd_gram},           {"h1", cmd_h1},
      {"hannorm", cmd_hannorm},     {"dk", cmd_dk},
      {"pick", cmd_pick},           {"thmc1", cmd_thmc1},
      {"interpseq", cmd_interpseq}, {"example316", cmd_example316},
      {"example317", cmd_example317}, {"selftest", cmd_selftest},
      {"plot", cmd_plot},
  };
  const Artifact a = dispatch.at(name)(o);
  const std::string text = render(a, a.exit_code == 1 && a.object ? "json" : o.format);
  if (!o.output.empty() && a.exit_code == 0) {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw InputError("cannot write " + o.output);
    f << text;
  } else {
    out << text;
  }
  return a.exit_code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_checked(args, out, err);
  } catch (const InputError& e) {
    err << "hplab: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    json diag{{"error", "numerical"}, {"message", e.what()}};
    diag["residual"] = std::isnan(e.residual()) ? json(nullptr) : json(e.residual());
    out << diag.dump(2) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "hplab: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "hplab: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "hplab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hplab
