#ifndef HISTFUSE_JSON_IO_HPP
#define HISTFUSE_JSON_IO_HPP

#include <json.hpp>

#include "histfuse/anova.hpp"
#include "histfuse/asymvar.hpp"
#include "histfuse/bliss.hpp"
#include "histfuse/estimates.hpp"
#include "histfuse/mc.hpp"

// JSON wire formats (schema "histfuse/1"). Square matrices serialize as
// {"dim": d, "rows": [[...], ...]}, rectangular ones as {"rows": [[...], ...]}.

namespace histfuse {

inline constexpr const char* kSchema = "histfuse/1";

namespace la {
void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);
void to_json(nlohmann::json& j, const SymMatrix& m);
void from_json(const nlohmann::json& j, SymMatrix& m);
}  // namespace la

void to_json(nlohmann::json& j, const VarianceBlocks& v);
void from_json(const nlohmann::json& j, VarianceBlocks& v);
void to_json(nlohmann::json& j, const Estimate& e);
void from_json(const nlohmann::json& j, Estimate& e);
void to_json(nlohmann::json& j, const JointEstimate& e);
void from_json(const nlohmann::json& j, JointEstimate& e);
void to_json(nlohmann::json& j, const HierarchyReport& r);

HistoricalSet historical_from_json(const nlohmann::json& j);
nlohmann::json historical_to_json(const HistoricalSet& h);

ProblemSpec problem_spec_from_json(const nlohmann::json& j);
nlohmann::json problem_spec_to_json(const ProblemSpec& spec);

namespace anova {
void to_json(nlohmann::json& j, const DesignXi& xi);
void from_json(const nlohmann::json& j, DesignXi& xi);
void to_json(nlohmann::json& j, const OptimalDesign& d);
void to_json(nlohmann::json& j, const Table1Row& r);
void to_json(nlohmann::json& j, const Table2Row& r);
}  // namespace anova

namespace bliss {
void to_json(nlohmann::json& j, const Allocation& a);
void to_json(nlohmann::json& j, const Table3Row& r);
}  // namespace bliss

namespace mc {
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& cfg);
// include_elapsed keeps the default output byte-identical across runs
nlohmann::json report_to_json(const McReport& rep, bool include_elapsed);
}  // namespace mc

}  // namespace histfuse

#endif
