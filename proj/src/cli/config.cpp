#include "kdyn/cli/config.hpp"

#include <algorithm>
#include <set>

#include "kdyn/error.hpp"

namespace kdyn::cli {
namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

void allow_keys(const json& obj, const std::string& path, const std::set<std::string>& keys) {
  if (!obj.is_object()) invalid(path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!keys.count(key)) invalid(path, "unknown field '" + key + "'");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

GaussRational exact(const json& v, const std::string& path) {
  if (v.is_number_integer()) return GaussRational(v.get<long>());
  if (v.is_string()) {
    try {
      return GaussRational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      invalid(path, "not an exact number: '" + v.get<std::string>() + "'");
    }
  }
  if (v.is_number_float()) invalid(path, "exact fields take strings or integers (quote decimals, e.g. \"1.5\")");
  invalid(path, "expected an exact number");
}

ExactVector exact_vector(const json& v, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array");
  ExactVector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(exact(v[i], join(path, i)));
  return out;
}

ExactMatrix exact_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) invalid(path, "expected a non-empty array of rows");
  std::vector<ExactVector> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(exact_vector(v[i], join(path, i)));
    if (rows.back().size() != rows.front().size()) invalid(join(path, i), "rows differ in length");
  }
  if (rows.front().empty()) invalid(path, "empty rows");
  return ExactMatrix(rows);
}

long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  return v.get<long>();
}

double real(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  return v.get<double>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) invalid(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) invalid(path, "expected a string");
  return v.get<std::string>();
}

std::vector<long> integer_vector(const json& v, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], join(path, i)));
  return out;
}

equilibrium::TrigPolynomial trig(const json& v, const std::string& path) {
  allow_keys(v, path, {"id", "terms", "cos", "character"});
  const int shapes = static_cast<int>(v.contains("terms")) + static_cast<int>(v.contains("cos")) +
                     static_cast<int>(v.contains("character"));
  if (shapes != 1) invalid(path, "give exactly one of 'terms', 'cos', 'character'");
  const std::string id = v.contains("id") ? text(v["id"], join(path, "id")) : std::string();
  equilibrium::TrigPolynomial p;
  if (v.contains("cos")) {
    p = equilibrium::TrigPolynomial::cosine(integer_vector(v["cos"], join(path, "cos")), id);
  } else if (v.contains("character")) {
    p = equilibrium::TrigPolynomial::character(integer_vector(v["character"], join(path, "character")), id);
  } else {
    const json& terms = v["terms"];
    const std::string tp = join(path, "terms");
    if (!terms.is_array()) invalid(tp, "expected an array");
    p.id = id;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      allow_keys(terms[i], join(tp, i), {"freq", "coeff"});
      if (!terms[i].contains("freq") || !terms[i].contains("coeff")) invalid(join(tp, i), "needs 'freq' and 'coeff'");
      p.terms.push_back({integer_vector(terms[i]["freq"], join(join(tp, i), "freq")),
                         exact(terms[i]["coeff"], join(join(tp, i), "coeff"))});
    }
    p.dim = p.terms.empty() ? 0 : static_cast<int>(p.terms.front().freq.size());
    for (std::size_t i = 0; i < p.terms.size(); ++i)
      if (static_cast<int>(p.terms[i].freq.size()) != p.dim) invalid(join(tp, i), "frequency lengths differ");
    p.normalize();
  }
  return p;
}

ModelConfig parse_model(const json& v, const std::string& path) {
  if (!v.is_object() || !v.contains("type")) invalid(path, "needs a 'type'");
  ModelConfig m;
  m.type = text(v["type"], join(path, "type"));
  if (m.type == "torus") {
    allow_keys(v, path, {"type", "k", "A"});
    if (!v.contains("A")) invalid(path, "torus needs 'A'");
    m.A = exact_matrix(v["A"], join(path, "A"));
    m.k = static_cast<int>(m.A.rows());
    if (v.contains("k") && integer(v["k"], join(path, "k")) != m.k) invalid(join(path, "k"), "does not match the size of A");
  } else if (m.type == "mazur") {
    allow_keys(v, path, {"type", "k", "word"});
    if (!v.contains("k") || !v.contains("word")) invalid(path, "mazur needs 'k' and 'word'");
    m.k = static_cast<int>(integer(v["k"], join(path, "k")));
    for (long w : integer_vector(v["word"], join(path, "word"))) m.word.push_back(static_cast<int>(w));
  } else if (m.type == "raw") {
    allow_keys(v, path, {"type", "k", "blocks", "kahler", "pushforward", "cup"});
    if (!v.contains("k") || !v.contains("blocks") || !v.contains("kahler")) invalid(path, "raw needs 'k', 'blocks', 'kahler'");
    m.k = static_cast<int>(integer(v["k"], join(path, "k")));
    const json& blocks = v["blocks"];
    if (!blocks.is_array()) invalid(join(path, "blocks"), "expected an array of matrices");
    for (std::size_t i = 0; i < blocks.size(); ++i) m.blocks.push_back(exact_matrix(blocks[i], join(join(path, "blocks"), i)));
    const json& kahler = v["kahler"];
    if (!kahler.is_array()) invalid(join(path, "kahler"), "expected an array of vectors");
    for (std::size_t i = 0; i < kahler.size(); ++i) m.kahler.push_back(exact_vector(kahler[i], join(join(path, "kahler"), i)));
    if (v.contains("pushforward")) {
      const json& pf = v["pushforward"];
      if (!pf.is_array()) invalid(join(path, "pushforward"), "expected an array of matrices");
      for (std::size_t i = 0; i < pf.size(); ++i)
        m.pushforward.push_back(exact_matrix(pf[i], join(join(path, "pushforward"), i)));
    }
    if (v.contains("cup")) {
      const json& cup = v["cup"];
      if (!cup.is_array()) invalid(join(path, "cup"), "expected an array of tables");
      for (std::size_t i = 0; i < cup.size(); ++i) {
        const std::string cp = join(join(path, "cup"), i);
        allow_keys(cup[i], cp, {"p", "q", "table"});
        if (!cup[i].contains("p") || !cup[i].contains("q") || !cup[i].contains("table")) invalid(cp, "needs p, q, table");
        m.cup.push_back({static_cast<int>(integer(cup[i]["p"], join(cp, "p"))),
                         static_cast<int>(integer(cup[i]["q"], join(cp, "q"))), exact_matrix(cup[i]["table"], join(cp, "table"))});
      }
    }
  } else {
    invalid(join(path, "type"), "must be torus, mazur or raw");
  }
  if (m.k < 1) invalid(join(path, "k"), "must be at least 1");
  return m;
}

json matrix_json(const ExactMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const ExactVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.to_string());
  return out;
}

json trig_json(const equilibrium::TrigPolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms) terms.push_back({{"freq", t.freq}, {"coeff", t.coeff.to_string()}});
  json out;
  out["id"] = p.id;
  out["terms"] = terms;
  return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

RunConfig parse_config(const std::string& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(source, e.byte);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  allow_keys(doc, "config",
             {"command", "precision_bits", "model", "n_max", "N_max", "grid", "tolerances", "output", "jordan", "relative",
              "cesaro", "green", "iterate", "mixing"});
  RunConfig c;
  if (doc.contains("command")) c.command = text(doc["command"], "command");
  if (doc.contains("precision_bits")) c.precision_bits = integer(doc["precision_bits"], "precision_bits");
  if (doc.contains("model")) c.model = parse_model(doc["model"], "model");
  if (doc.contains("n_max")) c.n_max = integer(doc["n_max"], "n_max");
  if (doc.contains("N_max")) c.N_max = integer(doc["N_max"], "N_max");
  if (doc.contains("grid")) {
    allow_keys(doc["grid"], "grid", {"resolution"});
    if (doc["grid"].contains("resolution")) c.grid_resolution = integer(doc["grid"]["resolution"], "grid.resolution");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    allow_keys(t, "tolerances", {"eigen", "submultiplicativity", "angle", "divergence"});
    if (t.contains("eigen")) c.tolerances.eigen = real(t["eigen"], "tolerances.eigen");
    if (t.contains("submultiplicativity")) c.tolerances.submultiplicativity = real(t["submultiplicativity"], "tolerances.submultiplicativity");
    if (t.contains("angle")) c.tolerances.angle = real(t["angle"], "tolerances.angle");
    if (t.contains("divergence")) c.tolerances.divergence = real(t["divergence"], "tolerances.divergence");
  }
  if (doc.contains("output")) {
    allow_keys(doc["output"], "output", {"path", "format"});
    if (doc["output"].contains("path")) c.output_path = text(doc["output"]["path"], "output.path");
    if (doc["output"].contains("format")) c.format = text(doc["output"]["format"], "output.format");
  }
  if (doc.contains("jordan")) {
    const json& s = doc["jordan"];
    allow_keys(s, "jordan", {"matrix", "p"});
    JordanSection j;
    if (s.contains("matrix")) j.matrix = exact_matrix(s["matrix"], "jordan.matrix");
    if (s.contains("p")) j.p = static_cast<int>(integer(s["p"], "jordan.p"));
    c.jordan = j;
  }
  if (doc.contains("relative")) {
    const json& s = doc["relative"];
    allow_keys(s, "relative", {"s", "T", "lambda_T"});
    RelativeSection r;
    if (s.contains("s")) r.s = static_cast<int>(integer(s["s"], "relative.s"));
    if (s.contains("T")) r.T = exact_vector(s["T"], "relative.T");
    if (s.contains("lambda_T")) r.lambda_T = exact(s["lambda_T"], "relative.lambda_T");
    c.relative = r;
  }
  if (doc.contains("cesaro")) {
    const json& s = doc["cesaro"];
    allow_keys(s, "cesaro", {"s", "S"});
    CesaroSection r;
    if (s.contains("s")) r.s = static_cast<int>(integer(s["s"], "cesaro.s"));
    if (s.contains("S")) r.S = exact_vector(s["S"], "cesaro.S");
    c.cesaro = r;
  }
  if (doc.contains("green")) {
    const json& s = doc["green"];
    allow_keys(s, "green", {"sample_from", "sample_to", "targets", "nu"});
    GreenSection g;
    if (s.contains("sample_from")) g.sample_from = integer(s["sample_from"], "green.sample_from");
    if (s.contains("sample_to")) g.sample_to = integer(s["sample_to"], "green.sample_to");
    if (s.contains("targets")) g.targets = static_cast<int>(integer(s["targets"], "green.targets"));
    if (s.contains("nu")) g.nu = real(s["nu"], "green.nu");
    c.green = g;
  }
  if (doc.contains("iterate")) {
    const json& s = doc["iterate"];
    allow_keys(s, "iterate", {"G", "Lambda", "u", "nu", "power", "resolution", "levels"});
    IterateSection it;
    if (!s.contains("G") || !s.contains("Lambda") || !s.contains("u")) invalid("iterate", "needs 'G', 'Lambda' and 'u'");
    if (!s["G"].is_array()) invalid("iterate.G", "expected an integer matrix");
    for (std::size_t i = 0; i < s["G"].size(); ++i) it.G.push_back(integer_vector(s["G"][i], join("iterate.G", i)));
    it.Lambda = exact_matrix(s["Lambda"], "iterate.Lambda");
    if (!s["u"].is_array()) invalid("iterate.u", "expected one trigonometric polynomial per component");
    for (std::size_t i = 0; i < s["u"].size(); ++i) it.u.push_back(trig(s["u"][i], join("iterate.u", i)));
    if (s.contains("nu")) it.nu = real(s["nu"], "iterate.nu");
    if (s.contains("power")) {
      if (s["power"].is_string() && s["power"].get<std::string>() == "auto") it.power = 0;
      else it.power = static_cast<int>(integer(s["power"], "iterate.power"));
    }
    if (s.contains("resolution")) it.resolution = integer(s["resolution"], "iterate.resolution");
    if (s.contains("levels"))
      for (long l : integer_vector(s["levels"], "iterate.levels")) it.levels.push_back(static_cast<int>(l));
    c.iterate = it;
  }
  if (doc.contains("mixing")) {
    const json& s = doc["mixing"];
    allow_keys(s, "mixing", {"mode", "m", "m_prime", "phi", "psi", "n_lo", "n_hi", "grid", "ergodic"});
    MixingSection mx;
    if (s.contains("mode")) mx.mode = text(s["mode"], "mixing.mode");
    if (s.contains("m")) mx.m = integer_vector(s["m"], "mixing.m");
    if (s.contains("m_prime")) mx.m_prime = integer_vector(s["m_prime"], "mixing.m_prime");
    if (s.contains("phi")) mx.phi = trig(s["phi"], "mixing.phi");
    if (s.contains("psi")) mx.psi = trig(s["psi"], "mixing.psi");
    if (s.contains("n_lo")) mx.n_lo = integer(s["n_lo"], "mixing.n_lo");
    if (s.contains("n_hi")) mx.n_hi = integer(s["n_hi"], "mixing.n_hi");
    if (s.contains("grid")) mx.grid = boolean(s["grid"], "mixing.grid");
    if (s.contains("ergodic")) mx.ergodic = boolean(s["ergodic"], "mixing.ergodic");
    c.mixing = mx;
  }

  // Cross-field rules.
  if (!c.command.empty() && std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    invalid("command", "unknown command '" + c.command + "'");
  if (c.precision_bits < 64) invalid("precision_bits", "must be at least 64");
  if (c.n_max < 1 || c.N_max < 1) invalid("n_max", "n_max and N_max must be positive");
  if (c.format != "json" && c.format != "csv") invalid("output.format", "must be json or csv");
  if (c.grid_resolution < 0) invalid("grid.resolution", "must be nonnegative");
  if (c.mixing) {
    if (c.mixing->mode != "characters" && c.mixing->mode != "trig") invalid("mixing.mode", "must be characters or trig");
    if (c.mixing->mode == "trig" && (!c.mixing->phi || !c.mixing->psi)) invalid("mixing", "trig mode needs 'phi' and 'psi'");
    if (c.mixing->n_lo < 0 || c.mixing->n_hi < c.mixing->n_lo) invalid("mixing.n_hi", "needs 0 <= n_lo <= n_hi");
  }
  if (c.iterate && c.iterate->power < 0) invalid("iterate.power", "must be positive or \"auto\"");
  return c;
}

json config_to_json(const RunConfig& c) {
  json out;
  out["command"] = c.command;
  out["precision_bits"] = c.precision_bits;
  if (c.model) {
    const auto& m = *c.model;
    json model;
    model["type"] = m.type;
    model["k"] = m.k;
    if (m.type == "torus") model["A"] = matrix_json(m.A);
    if (m.type == "mazur") model["word"] = m.word;
    if (m.type == "raw") {
      model["blocks"] = json::array();
      for (const auto& b : m.blocks) model["blocks"].push_back(matrix_json(b));
      model["kahler"] = json::array();
      for (const auto& v : m.kahler) model["kahler"].push_back(vector_json(v));
      if (!m.pushforward.empty()) {
        model["pushforward"] = json::array();
        for (const auto& b : m.pushforward) model["pushforward"].push_back(matrix_json(b));
      }
      if (!m.cup.empty()) {
        model["cup"] = json::array();
        for (const auto& e : m.cup) model["cup"].push_back({{"p", e.p}, {"q", e.q}, {"table", matrix_json(e.table)}});
      }
    }
    out["model"] = model;
  }
  out["n_max"] = c.n_max;
  out["N_max"] = c.N_max;
  out["grid"] = {{"resolution", c.grid_resolution}};
  out["tolerances"] = {{"eigen", c.tolerances.eigen},
                       {"submultiplicativity", c.tolerances.submultiplicativity},
                       {"angle", c.tolerances.angle},
                       {"divergence", c.tolerances.divergence}};
  out["output"] = {{"path", c.output_path}, {"format", c.format}};
  if (c.jordan) {
    json j;
    if (c.jordan->matrix) j["matrix"] = matrix_json(*c.jordan->matrix);
    j["p"] = c.jordan->p;
    out["jordan"] = j;
  }
  if (c.relative) {
    json r;
    r["s"] = c.relative->s;
    if (c.relative->T) r["T"] = vector_json(*c.relative->T);
    if (c.relative->lambda_T) r["lambda_T"] = c.relative->lambda_T->to_string();
    out["relative"] = r;
  }
  if (c.cesaro) {
    json r;
    r["s"] = c.cesaro->s;
    if (c.cesaro->S) r["S"] = vector_json(*c.cesaro->S);
    out["cesaro"] = r;
  }
  if (c.green)
    out["green"] = {{"sample_from", c.green->sample_from},
                    {"sample_to", c.green->sample_to},
                    {"targets", c.green->targets},
                    {"nu", c.green->nu}};
  if (c.iterate) {
    const auto& it = *c.iterate;
    json s;
    s["G"] = it.G;
    s["Lambda"] = matrix_json(it.Lambda);
    s["u"] = json::array();
    for (const auto& p : it.u) s["u"].push_back(trig_json(p));
    s["nu"] = it.nu;
    if (it.power == 0) s["power"] = "auto";
    else s["power"] = it.power;
    s["resolution"] = it.resolution;
    s["levels"] = it.levels;
    out["iterate"] = s;
  }
  if (c.mixing) {
    const auto& mx = *c.mixing;
    json s;
    s["mode"] = mx.mode;
    s["m"] = mx.m;
    s["m_prime"] = mx.m_prime;
    if (mx.phi) s["phi"] = trig_json(*mx.phi);
    if (mx.psi) s["psi"] = trig_json(*mx.psi);
    s["n_lo"] = mx.n_lo;
    s["n_hi"] = mx.n_hi;
    s["grid"] = mx.grid;
    s["ergodic"] = mx.ergodic;
    out["mixing"] = s;
  }
  return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return config_to_json(a) == config_to_json(b); }

models::GradedCohomologyAction build_action(const ModelConfig& m) {
  if (m.type == "torus") return models::torus_action({m.k, m.A});
  if (m.type == "mazur") {
    auto model = models::mazur_involutions(m.k);
    model.word = m.word;
    return models::mazur_action(model);
  }
  models::RawActionInput in;
  in.k = m.k;
  in.blocks = m.blocks;
  in.kahler_class = m.kahler;
  in.pushforward_blocks = m.pushforward;
  if (!m.cup.empty()) {
    models::CupProduct cup;
    for (const auto& e : m.cup) cup.table[{e.p, e.q}] = e.table;
    in.cup = cup;
  }
  return models::raw_action(in);
}

}  // namespace kdyn::cli
