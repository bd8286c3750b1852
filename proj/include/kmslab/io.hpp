#ifndef KMSLAB_IO_HPP
#define KMSLAB_IO_HPP

#include "kmslab/algebra.hpp"
#include "kmslab/axb.hpp"
#include "kmslab/crossed_product.hpp"
#include "kmslab/group_traces.hpp"
#include "kmslab/groupoid.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/measures.hpp"

#include <json.hpp>

#include <string>

namespace kmslab::io {

using json = nlohmann::json;

json load_json_file(const std::string &path);

// Scalars serialize without float drift: "p/q" for rationals,
// ["p/q","r/s"] for Gaussian rationals, {"zeta":N,"terms":[[k,"p/q"],...]}
// for anything else.  Parsing accepts all three forms.
json scalar_to_json(const Cyclotomic &v);
Cyclotomic scalar_from_json(const json &j);

json rational_to_json(const Rational &r);
Rational rational_from_json(const json &j);

// Groupoid documents: explicit arrow/compose form or action form.
struct GroupoidInput {
  FiniteGroupoid groupoid;
  bool from_action = false;
  FiniteGroup group;              // action form only
  std::vector<std::string> space; // action form only
  std::vector<int> action;        // action form only
};

GroupoidInput parse_groupoid(const json &doc);

FiniteGroup parse_group(const json &doc);
Cocycle parse_cocycle(const json &doc, const FiniteGroupoid &g);
ExactFunctional parse_state(const json &doc, const FiniteGroupoid &g);
FiniteZSystem parse_z_system(const json &doc);
std::vector<std::vector<Cyclotomic>> parse_trace_values(const json &doc, long cutoff,
                                                        std::size_t orbit_count);
AbelianTraceMeasure parse_abelian_measure(const json &doc);
IdealSemigroupData parse_ideal_data(const json &doc);

// AlgebraElement literal: "3*d(g1) + (1+2i)*d(g2)".
ExactElement parse_element_expr(const std::string &text, const FiniteGroupoid &g);

json groupoid_to_json(const FiniteGroupoid &g);
json state_to_json(const ExactFunctional &w, bool skip_zeros = true);
json measure_to_json(const UnitMeasure &mu);
json polytope_to_json(const MeasurePolytope &p, const FiniteGroupoid &g);
json diagnostic_to_json(const KmsDiagnostic &d);
json classification_to_json(const KMSClassification &cls, const FiniteGroupoid &g);
json oracle_to_json(const OracleSolution &o);
json comparison_to_json(const OracleComparison &c);
json character_table_to_json(const CharacterTable &t, const FiniteGroup &g);
std::string character_table_to_text(const CharacterTable &t, const FiniteGroup &g);
json trace_data_to_json(const TraceData &data);
json extremal_triples_to_json(const std::vector<ExtremalTraceTriple> &triples,
                              const FiniteGroup &gamma, const std::vector<std::string> &space);
json real_value_to_json(const RealValue &v);
json ideal_to_json(const IdealSemigroupData &data, const Ideal &ideal);
json ideal_measure_to_json(const TruncatedIdealMeasure &m);
json element_to_json(const ExactElement &f);

} // namespace kmslab::io

#endif
