#include "kmslab/io.hpp"

#include "kmslab/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace kmslab::io {

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error &e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
  return doc;
}

json rational_to_json(const Rational &r) { return rational_to_string(r); }

Rational rational_from_json(const json &j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw SchemaError("expected a rational ('p/q' or integer), got " + j.dump());
}

json scalar_to_json(const Cyclotomic &v) {
  if (v.is_rational()) return rational_to_json(v.rational_value());
  if (v.is_gaussian())
    return json::array({rational_to_json(v.gaussian_real()), rational_to_json(v.gaussian_imag())});
  json terms = json::array();
  for (const auto &[e, c] : v.terms()) terms.push_back(json::array({e, rational_to_json(c)}));
  return json{{"zeta", v.order()}, {"terms", terms}};
}

Cyclotomic scalar_from_json(const json &j) {
  if (j.is_number_integer() || j.is_string()) return Cyclotomic(rational_from_json(j));
  if (j.is_array()) {
    if (j.size() != 2) throw SchemaError("complex scalar needs [re, im]");
    return Cyclotomic::from_complex_rational(rational_from_json(j[0]), rational_from_json(j[1]));
  }
  if (j.is_object() && j.contains("zeta") && j.contains("terms")) {
    long order = j.at("zeta").get<long>();
    Cyclotomic acc(0);
    for (const auto &term : j.at("terms")) {
      if (!term.is_array() || term.size() != 2) throw SchemaError("bad cyclotomic term");
      long e = term[0].get<long>();
      acc += Cyclotomic(rational_from_json(term[1])) * Cyclotomic::root_of_unity(order, e);
    }
    return acc;
  }
  throw SchemaError("unrecognized scalar " + j.dump());
}

namespace {

std::string require_string(const json &j, const char *what) {
  if (!j.is_string()) throw SchemaError(std::string("expected string for ") + what);
  return j.get<std::string>();
}

} // namespace

FiniteGroup parse_group(const json &doc) {
  if (!doc.is_object() || !doc.contains("elements") || !doc.contains("table"))
    throw SchemaError("group document needs 'elements' and 'table'");
  std::vector<std::string> elements;
  for (const auto &e : doc.at("elements")) elements.push_back(require_string(e, "group element"));
  std::vector<std::vector<std::string>> table;
  for (const auto &row : doc.at("table")) {
    std::vector<std::string> r;
    for (const auto &cell : row) r.push_back(require_string(cell, "table cell"));
    table.push_back(std::move(r));
  }
  return validate_group(elements, table);
}

GroupoidInput parse_groupoid(const json &doc) {
  GroupoidInput input;
  if (doc.contains("action")) {
    const json &act = doc.at("action");
    if (!act.contains("group") || !act.contains("space") || !act.contains("map"))
      throw SchemaError("action form needs 'group', 'space' and 'map'");
    input.from_action = true;
    input.group = parse_group(act.at("group"));
    for (const auto &p : act.at("space")) input.space.push_back(require_string(p, "space point"));
    int m = static_cast<int>(input.space.size());
    auto point_index = [&](const std::string &id) {
      for (int i = 0; i < m; ++i)
        if (input.space[i] == id) return i;
      throw SchemaError("action map references unknown point '" + id + "'");
    };
    input.action.assign(input.group.order() * m, -1);
    for (const auto &triple : act.at("map")) {
      if (!triple.is_array() || triple.size() != 3)
        throw SchemaError("action map entries are [g, x, gx]");
      int gi = input.group.element_index(require_string(triple[0], "group element"));
      int x = point_index(require_string(triple[1], "point"));
      int gx = point_index(require_string(triple[2], "point"));
      input.action[gi * m + x] = gx;
    }
    for (int gi = 0; gi < input.group.order(); ++gi)
      for (int x = 0; x < m; ++x)
        if (input.action[gi * m + x] < 0)
          throw NotAnAction("pair (" + input.group.elements[gi] + "," + input.space[x] +
                            ") missing from the action map");
    input.groupoid = transformation_groupoid(input.space, input.group, input.action);
    return input;
  }

  if (!doc.contains("units") || !doc.contains("arrows"))
    throw SchemaError("groupoid document needs 'units' and 'arrows' (or an 'action')");
  RawGroupoid raw;
  for (const auto &u : doc.at("units")) raw.units.push_back(require_string(u, "unit"));
  for (const auto &a : doc.at("arrows")) {
    RawGroupoid::Arrow arrow;
    arrow.id = require_string(a.at("id"), "arrow id");
    arrow.src = require_string(a.at("src"), "arrow src");
    arrow.tgt = require_string(a.at("tgt"), "arrow tgt");
    if (a.contains("inv")) arrow.inv = require_string(a.at("inv"), "arrow inv");
    raw.arrows.push_back(std::move(arrow));
  }
  if (doc.contains("compose"))
    for (const auto &c : doc.at("compose")) {
      if (!c.is_array() || c.size() != 3) throw SchemaError("compose entries are [a, b, ab]");
      raw.compose.push_back({require_string(c[0], "arrow"), require_string(c[1], "arrow"),
                             require_string(c[2], "arrow")});
    }
  input.groupoid = validate_groupoid(raw);
  return input;
}

Cocycle parse_cocycle(const json &doc, const FiniteGroupoid &g) {
  if (!doc.is_object() || !doc.contains("cocycle"))
    throw SchemaError("cocycle document needs a 'cocycle' object");
  std::map<std::string, std::int64_t> values;
  for (const auto &[key, value] : doc.at("cocycle").items()) {
    if (!value.is_number_integer())
      throw SchemaError("cocycle values are integers (got " + value.dump() + " at '" + key + "')");
    values[key] = value.get<std::int64_t>();
  }
  for (const auto &[key, value] : values)
    g.arrow_index(key); // unknown ids are schema errors here
  return validate_cocycle(g, values);
}

ExactFunctional parse_state(const json &doc, const FiniteGroupoid &g) {
  if (!doc.is_object() || !doc.contains("state"))
    throw SchemaError("state document needs a 'state' object");
  ExactFunctional w = ExactFunctional::zero(g);
  for (const auto &[key, value] : doc.at("state").items())
    w.weights[g.arrow_index(key)] = scalar_from_json(value);
  return w;
}

FiniteZSystem parse_z_system(const json &doc) {
  if (!doc.is_object() || !doc.contains("points") || !doc.contains("shift"))
    throw SchemaError("system document needs 'points' and 'shift'");
  std::vector<std::string> points;
  for (const auto &p : doc.at("points")) points.push_back(require_string(p, "point"));
  auto index = [&](const std::string &id) {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == id) return static_cast<int>(i);
    throw SchemaError("shift references unknown point '" + id + "'");
  };
  std::vector<int> shift(points.size(), -1);
  for (const auto &pair : doc.at("shift")) {
    if (!pair.is_array() || pair.size() != 2) throw SchemaError("shift entries are [x, Tx]");
    shift[index(require_string(pair[0], "point"))] = index(require_string(pair[1], "point"));
  }
  for (int y : shift)
    if (y < 0) throw SchemaError("shift does not cover every point");
  return validate_z_system(points, shift);
}

std::vector<std::vector<Cyclotomic>> parse_trace_values(const json &doc, long cutoff,
                                                        std::size_t orbit_count) {
  if (!doc.is_object() || !doc.contains("values"))
    throw SchemaError("values document needs a 'values' array");
  std::vector<std::vector<Cyclotomic>> values;
  for (const auto &row : doc.at("values")) {
    std::vector<Cyclotomic> r;
    for (const auto &cell : row) r.push_back(scalar_from_json(cell));
    if (static_cast<long>(r.size()) != 2 * cutoff + 1)
      throw SchemaError("value rows must have 2M+1 entries");
    values.push_back(std::move(r));
  }
  if (values.size() != orbit_count) throw SchemaError("one value row per orbit required");
  return values;
}

AbelianTraceMeasure parse_abelian_measure(const json &doc) {
  if (!doc.is_object() || !doc.contains("measure"))
    throw SchemaError("measure document needs a 'measure' array");
  AbelianTraceMeasure nu;
  for (const auto &row : doc.at("measure")) {
    std::vector<Rational> fiber;
    for (const auto &cell : row) fiber.push_back(rational_from_json(cell));
    nu.weights.push_back(std::move(fiber));
  }
  return nu;
}

IdealSemigroupData parse_ideal_data(const json &doc) {
  IdealSemigroupData data;
  if (doc.contains("class_group"))
    for (const auto &d : doc.at("class_group")) data.class_moduli.push_back(d.get<long>());
  if (!doc.contains("primes")) throw SchemaError("ideal data needs a 'primes' array");
  for (const auto &p : doc.at("primes")) {
    IdealSemigroupData::Prime prime;
    prime.label = require_string(p.at("v"), "prime label");
    prime.norm = p.at("norm").get<long>();
    if (p.contains("class"))
      for (const auto &c : p.at("class")) prime.cls.push_back(c.get<long>());
    else
      prime.cls.assign(data.class_moduli.size(), 0);
    data.primes.push_back(std::move(prime));
  }
  return validate_ideal_data(data);
}

// --- element expression parser -------------------------------------------

namespace {

struct ExprParser {
  const std::string &text;
  std::size_t pos = 0;

  explicit ExprParser(const std::string &t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  Rational parse_number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
            text[pos] == '.')) {
      digits = true;
      ++pos;
    }
    if (!digits) throw SchemaError("expected a number at position " + std::to_string(start) +
                                   " in '" + text + "'");
    return parse_rational(text.substr(start, pos - start));
  }

  // scalar := '(' inner ')' | inner;  inner := term {('+'|'-') term};
  // term := number ['i'] | 'i'
  Cyclotomic parse_scalar() {
    if (eat('(')) {
      Cyclotomic v = parse_scalar_inner();
      if (!eat(')')) throw SchemaError("missing ')' in scalar of '" + text + "'");
      return v;
    }
    return parse_scalar_inner();
  }

  Cyclotomic parse_scalar_inner() {
    Cyclotomic acc = parse_scalar_term();
    while (true) {
      char c = peek();
      if (c == '+' || c == '-') {
        // only continue when this is scalar addition, not element addition:
        // scalar context ends before a 'd(' or after ')' handled by caller
        std::size_t save = pos;
        ++pos;
        if (peek() == 'd') {
          pos = save;
          break;
        }
        pos = save;
        if (c == '+') {
          eat('+');
          acc += parse_scalar_term();
        } else {
          eat('-');
          acc -= parse_scalar_term();
        }
      } else {
        break;
      }
    }
    return acc;
  }

  Cyclotomic parse_scalar_term() {
    skip_ws();
    if (peek() == 'i') {
      ++pos;
      return Cyclotomic::i();
    }
    if (peek() == '+' || peek() == '-') {
      bool neg = peek() == '-';
      std::size_t save = pos;
      ++pos;
      if (peek() == 'i') {
        ++pos;
        return neg ? -Cyclotomic::i() : Cyclotomic::i();
      }
      pos = save;
    }
    Rational r = parse_number();
    skip_ws();
    if (pos < text.size() && text[pos] == 'i') {
      ++pos;
      return Cyclotomic(r) * Cyclotomic::i();
    }
    return Cyclotomic(r);
  }

  // delta := 'd' '(' id ')'
  int parse_delta(const FiniteGroupoid &g) {
    skip_ws();
    if (pos >= text.size() || text[pos] != 'd')
      throw SchemaError("expected d(arrow) in '" + text + "'");
    ++pos;
    if (!eat('(')) throw SchemaError("expected '(' after d in '" + text + "'");
    std::size_t start = pos;
    int depth = 1;
    while (pos < text.size() && depth > 0) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')') --depth;
      if (depth > 0) ++pos;
    }
    if (depth != 0) throw SchemaError("unterminated d( in '" + text + "'");
    std::string id = text.substr(start, pos - start);
    ++pos; // closing paren
    try {
      return g.arrow_index(id);
    } catch (const Error &) {
      throw SchemaError("unknown arrow '" + id + "' in element expression");
    }
  }

  ExactElement parse(const FiniteGroupoid &g) {
    ExactElement acc;
    acc.groupoid = &g;
    bool first = true;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      Cyclotomic sign(1);
      if (!first || peek() == '+' || peek() == '-') {
        if (eat('+')) {
        } else if (eat('-')) {
          sign = Cyclotomic(-1);
        } else if (!first) {
          throw SchemaError("expected '+' or '-' between terms in '" + text + "'");
        }
      }
      first = false;
      Cyclotomic coeff(1);
      skip_ws();
      if (peek() != 'd') {
        coeff = parse_scalar();
        if (!eat('*')) throw SchemaError("expected '*' before d(arrow) in '" + text + "'");
      }
      int arrow = parse_delta(g);
      acc += ExactElement::delta(g, arrow, sign * coeff);
    }
    if (first) throw SchemaError("empty element expression");
    return acc;
  }
};

} // namespace

ExactElement parse_element_expr(const std::string &text, const FiniteGroupoid &g) {
  ExprParser parser(text);
  return parser.parse(g);
}

// --- emitters --------------------------------------------------------------

json groupoid_to_json(const FiniteGroupoid &g) {
  json arrows = json::array();
  for (int a = 0; a < g.arrow_count(); ++a)
    arrows.push_back(json{{"id", g.arrows[a]},
                          {"src", g.units[g.src[a]]},
                          {"tgt", g.units[g.tgt[a]]},
                          {"inv", g.arrows[g.inv[a]]}});
  return json{{"units", g.units}, {"arrows", arrows}};
}

json state_to_json(const ExactFunctional &w, bool skip_zeros) {
  json state = json::object();
  const FiniteGroupoid &g = *w.groupoid;
  for (int a = 0; a < g.arrow_count(); ++a) {
    if (skip_zeros && w.weights[a].is_zero()) continue;
    state[g.arrows[a]] = scalar_to_json(w.weights[a]);
  }
  return json{{"state", state}};
}

json measure_to_json(const UnitMeasure &mu) {
  json weights = json::object();
  const FiniteGroupoid &g = *mu.groupoid;
  for (int u = 0; u < g.unit_count(); ++u) weights[g.units[u]] = rational_to_json(mu.weights[u]);
  return weights;
}

json polytope_to_json(const MeasurePolytope &p, const FiniteGroupoid &g) {
  json vertices = json::array();
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    json orbit = json::array();
    for (int u : p.orbit_blocks[i]) orbit.push_back(g.units[u]);
    vertices.push_back(json{{"orbit", orbit}, {"weights", measure_to_json(p.vertices[i])}});
  }
  return json{{"vertices", vertices}, {"count", p.vertices.size()}};
}

json diagnostic_to_json(const KmsDiagnostic &d) {
  json out{{"L", d.linear},        {"N", d.normalized},     {"H", d.hermitian},
           {"P", d.positive},      {"I", d.isotropy_zero},  {"pass", d.all()}};
  if (!d.witness_linear.empty()) out["witness_L"] = d.witness_linear;
  if (!d.witness_positive.empty()) out["witness_P"] = d.witness_positive;
  return out;
}

json classification_to_json(const KMSClassification &cls, const FiniteGroupoid &g) {
  json out;
  out["q"] = rational_to_json(cls.q.q);
  out["measure_polytope"] = polytope_to_json(cls.polytope, g);
  json orbit_data = json::array();
  for (const auto &data : cls.orbit_data) {
    json entry{{"representative", g.units[data.representative]},
               {"isotropy_order", data.isotropy.order()},
               {"trivial_isotropy", data.trivial_isotropy}};
    if (data.table) {
      entry["character_count"] = data.table->rows.size() + (data.table->exact
                                                                ? 0
                                                                : data.table->float_rows.size() -
                                                                      data.table->rows.size());
      entry["table_exact"] = data.table->exact;
    }
    orbit_data.push_back(std::move(entry));
  }
  out["orbits"] = orbit_data;
  json extremes = json::array();
  for (const auto &e : cls.extremes) {
    extremes.push_back(json{{"orbit", e.orbit_index},
                            {"vertex", e.vertex_index},
                            {"character", e.character_index},
                            {"state", state_to_json(e.state)["state"]}});
  }
  out["extreme_states"] = extremes;
  out["extreme_count"] = cls.extremes.size();
  return out;
}

json oracle_to_json(const OracleSolution &o) {
  json directions = json::array();
  for (const auto &dir : o.directions) directions.push_back(state_to_json(dir)["state"]);
  return json{{"dimension", o.dimension()},
              {"particular", state_to_json(o.particular)["state"]},
              {"directions", directions}};
}

json comparison_to_json(const OracleComparison &c) {
  json out{{"forward_inclusion", c.forward_inclusion},
           {"classified_dimension", c.classified_dim},
           {"oracle_dimension", c.oracle_dim},
           {"dimensions_equal", c.dims_equal},
           {"positivity_cuts", c.positivity_cuts},
           {"affinely_independent", c.affinely_independent},
           {"pass", c.all()}};
  if (!c.witness_inclusion.empty()) out["witness_inclusion"] = c.witness_inclusion;
  if (!c.positivity_note.empty()) out["positivity_note"] = c.positivity_note;
  return out;
}

json character_table_to_json(const CharacterTable &t, const FiniteGroup &g) {
  json classes = json::array();
  for (const auto &cls : t.classes.classes) {
    json members = json::array();
    for (int x : cls) members.push_back(g.elements[x]);
    classes.push_back(members);
  }
  json out{{"classes", classes}, {"dimensions", t.dimensions}, {"exact", t.exact}};
  if (t.exact) {
    json rows = json::array();
    for (const auto &row : t.rows) {
      json r = json::array();
      for (const auto &v : row) r.push_back(scalar_to_json(v));
      rows.push_back(r);
    }
    out["rows"] = rows;
  } else {
    json rows = json::array();
    for (const auto &row : t.float_rows) {
      json r = json::array();
      for (const auto &v : row) r.push_back(json::array({v.real(), v.imag()}));
      rows.push_back(r);
    }
    out["rows_float"] = rows;
    out["residual"] = t.residual;
  }
  return out;
}

std::string character_table_to_text(const CharacterTable &t, const FiniteGroup &g) {
  std::ostringstream os;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"chi \\ class"};
  for (const auto &cls : t.classes.classes)
    header.push_back(g.elements[cls.front()] + "(" + std::to_string(cls.size()) + ")");
  cells.push_back(header);
  for (std::size_t i = 0; i < t.float_rows.size(); ++i) {
    std::vector<std::string> row{"chi_" + std::to_string(i)};
    for (std::size_t c = 0; c < t.float_rows[i].size(); ++c) {
      if (t.exact) {
        row.push_back(t.rows[i][c].to_string());
      } else {
        std::ostringstream cell;
        cell.precision(6);
        cell << t.float_rows[i][c].real();
        if (std::abs(t.float_rows[i][c].imag()) > 1e-12) cell << "+" << t.float_rows[i][c].imag() << "i";
        row.push_back(cell.str());
      }
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto &row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto &row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      for (std::size_t pad = row[c].size(); pad < width[c] + 2; ++pad) os << ' ';
    }
    os << '\n';
  }
  return os.str();
}

json trace_data_to_json(const TraceData &data) {
  json entries = json::array();
  for (const auto &entry : data.entries) {
    json moments = json::array();
    for (const auto &m : entry.lambda.moments) moments.push_back(scalar_to_json(m));
    entries.push_back(json{{"orbit", entry.orbit_index},
                           {"weight", rational_to_json(entry.weight)},
                           {"period", entry.lambda.period},
                           {"cutoff", entry.lambda.cutoff},
                           {"moments", moments}});
  }
  return json{{"entries", entries}};
}

json extremal_triples_to_json(const std::vector<ExtremalTraceTriple> &triples,
                              const FiniteGroup &gamma, const std::vector<std::string> &space) {
  json out = json::array();
  for (const auto &triple : triples) {
    json orbit = json::array();
    for (int x : triple.orbit) orbit.push_back(space[x]);
    json stab = json::array();
    for (int h : triple.stabilizer) stab.push_back(gamma.elements[h]);
    out.push_back(json{{"orbit", orbit},
                       {"stabilizer", stab},
                       {"character", triple.character_index},
                       {"trace", state_to_json(triple.trace)["state"]}});
  }
  return out;
}

json real_value_to_json(const RealValue &v) {
  if (v.exact) return json{{"exact", rational_to_json(v.rat)}, {"approx", v.approx}};
  return json{{"approx", v.approx}};
}

json ideal_to_json(const IdealSemigroupData &data, const Ideal &ideal) {
  json exps = json::object();
  for (std::size_t v = 0; v < ideal.exponents.size(); ++v)
    if (ideal.exponents[v] != 0) exps[data.primes[v].label] = ideal.exponents[v];
  return json{{"exponents", exps}, {"norm", ideal_norm(data, ideal)}};
}

json ideal_measure_to_json(const TruncatedIdealMeasure &m) {
  json weights = json::array();
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    json entry{{"ideal", ideal_to_json(*m.data, m.support[i])}};
    if (m.exact)
      entry["weight"] = rational_to_json(m.weights_exact[i]);
    else
      entry["weight"] = m.weights_float[i];
    weights.push_back(std::move(entry));
  }
  json out{{"truncation", m.truncation}, {"exact", m.exact}, {"weights", weights}};
  out["missing_mass"] = real_value_to_json(m.missing_mass);
  if (m.divergent_normalizer_warning)
    out["warning"] = "normalizer diverges as the truncation grows (beta <= 2)";
  return out;
}

json element_to_json(const ExactElement &f) {
  json coeffs = json::object();
  for (const auto &[a, c] : f.coeffs) coeffs[f.groupoid->arrows[a]] = scalar_to_json(c);
  return json{{"element", coeffs}};
}

} // namespace kmslab::io
