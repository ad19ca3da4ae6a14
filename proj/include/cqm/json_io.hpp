#pragma once

// JSON encodings of the model types. Readers throw InputError with the
// JSON path of the offending value; writers emit canonical ("cqm/1") forms.

#include "cqm/comprehension.hpp"
#include "cqm/fhilb.hpp"
#include "cqm/multitest.hpp"
#include "cqm/qprob.hpp"
#include "cqm/report.hpp"
#include "cqm/testspace.hpp"

#include <json.hpp>

#include <string>

namespace cqm::io {

using nlohmann::json;

inline constexpr const char* kSchema = "cqm/1";

json read_file(const std::string& path);
/// Writes pretty JSON with a trailing newline; "-" means stdout.
void write_file(const std::string& path, const json& j);
/// Rejects documents whose "schema" field is present and not cqm/1.
void check_schema(const json& j);

FinSet finset_from(const json& j, const std::string& path, const std::string& name = "X");
json to_json(const FinSet& x);

FinRel finrel_from(const json& j, const std::string& path);
json to_json(const FinRel& r);

/// Cells only; the boundary sets are supplied by the caller.
SetSpan setspan_from(const json& j, const std::string& path, const FinSet& dom, const FinSet& cod);
json to_json(const SetSpan& s);

TestSpace testspace_from(const json& j, const std::string& path);
json to_json(const TestSpace& t);
json family_json(const FinSet& x, const Family& f);

FinCategory category_from(const json& j, const std::string& path);
json to_json(const FinCategory& c);
FinFunctor functor_from(const json& j, const std::string& path);
LaxSpec lax_from(const json& j, const std::string& path);
json to_json(const LaxSpec& spec);

Complex complex_from(const json& j, const std::string& path);
json to_json(Complex z);
CMatrix matrix_from(const json& j, const std::string& path);
json to_json(const CMatrix& m);
CVector vector_from(const json& j, const std::string& path);
json to_json(const CVector& v);

RayDict raydict_from(const json& j, const std::string& path, double eps);
json to_json(const RayDict& d);
HilbTestable hilb_from(const json& j, const std::string& path, double eps);

MeasureSample sample_from(const json& j, const std::string& path, double eps);
MeasureTable table_from(const json& j, const std::string& path);

MultiTestable multitestable_from(const json& j, const std::string& path, const SizeGuard& guard);
json to_json(const MultiTestable& a);
MultiMorphism multimorphism_from(const json& j, const std::string& path);

}  // namespace cqm::io
