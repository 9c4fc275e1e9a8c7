#pragma once

// Umbrella header: question-level, capability-aware role assignment for
// multi-agent debate, plus the MAD/DMAD debate engines and the offline
// evaluation harness around them.

#include "metadebate/criteria.hpp"
#include "metadebate/digest.hpp"
#include "metadebate/engines.hpp"
#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/harness.hpp"
#include "metadebate/meta_debate.hpp"
#include "metadebate/prompts.hpp"
#include "metadebate/review_parse.hpp"
#include "metadebate/rng.hpp"
#include "metadebate/scripted.hpp"
#include "metadebate/strategies.hpp"
#include "metadebate/types.hpp"
