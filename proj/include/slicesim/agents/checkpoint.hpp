#pragma once

#include <iosfwd>
#include <string>

#include "slicesim/agents/qnetwork.hpp"
#include "slicesim/agents/qtable.hpp"

namespace slicesim::agents {

// Q-network checkpoints are plain text:
//
//   slicesim-qnetwork 1
//   sizes <n> <s0> <s1> ... <s(n-1)>
//   online <count>
//   <count values, one per line, row-major weights then bias per layer>
//   target <count>
//   <count values>
//
// Values are printed with 17 significant digits, so a reload is exact.

inline constexpr const char* kCheckpointMagic = "slicesim-qnetwork";
inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(const QNetwork& net, std::ostream& out);
QNetwork read_checkpoint(std::istream& in); // throws InvalidParams on malformed input

void save_checkpoint(const QNetwork& net, const std::string& path); // IoError
QNetwork load_checkpoint(const std::string& path);

/// Parse the "state,action,value" CSV written by QTable::write_csv.
QTable read_qtable_csv(std::istream& in, StepSchedule schedule, double gamma);

} // namespace slicesim::agents
