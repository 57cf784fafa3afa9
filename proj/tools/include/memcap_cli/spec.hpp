#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "memcap/channels.hpp"

namespace memcap::cli {

/// Parsed channel-spec document.
///
/// {"branches": [{"type": "amplitude_damping", "gamma": 0.4},
///               {"type": "depolarizing", "p": 0.1},
///               {"type": "kraus", "operators": [[[a, b], [c, d]], ...]}],
///  "memory": {"kind": "periodic"}
///          | {"kind": "random", "q": [...]}
///          | {"kind": "markov", "Q": [[...], ...], "lambda": [...]}}
///
/// Kraus entries are real numbers or [re, im] pairs. Unknown keys are
/// rejected. Throws ValidationError on any schema or consistency problem.
struct ChannelSpec {
  std::vector<QubitChannel> branches;
  MemoryLaw memory;
};

ChannelSpec parse_channel_spec(std::string_view text);
ChannelSpec load_channel_spec(const std::filesystem::path& path);

}  // namespace memcap::cli
