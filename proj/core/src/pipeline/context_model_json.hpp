#pragma once

#include "../common/json_util.hpp"
#include "locflow/pipeline/context_model.hpp"

namespace locflow::pipeline::detail {

using locflow::detail::json;

json context_model_to_json(const ContextVoters& voters);
ContextVoters context_model_from_json(const json& j);

}  // namespace locflow::pipeline::detail
