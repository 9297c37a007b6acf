#ifndef HAWKES_MODEL_IO_HPP
#define HAWKES_MODEL_IO_HPP

#include <string>

#include "model.hpp"
#include "simulate.hpp"

namespace hawkes {

// Model config, JSON shaped:
//   {"d": 2, "mu": [1.0, 0.5],
//    "kernels": [{"i": 1, "j": 1, "type": "exp", "alpha": 0.3, "beta": 1.0},
//                {"i": 2, "j": 1, "type": "grid", "dt": 0.1, "values": [0.2, 0.1]}]}
// Indices are 1-based; entries not listed are zero kernels.
HawkesModel model_from_json(const std::string& text);
HawkesModel load_model(const std::string& path);
std::string model_to_json(const HawkesModel& model);

// Event stream CSV: comment header with the stream metadata, then
// time,type,cluster_id,parent_row,generation rows (parent_row -1 for
// immigrants, -2 throughout for thinning output). Doubles round-trip
// bit-exactly.
void write_events_csv(const EventStream& stream, const std::string& path);
EventStream read_events_csv(const std::string& path);

}  // namespace hawkes

#endif
