#include "model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "json.hpp"

namespace hawkes {

using nlohmann::json;

HawkesModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("model config is not valid JSON: ") + e.what());
  }
  try {
    require(doc.contains("d") && doc.contains("mu"), ErrorCode::parse,
            "model config needs 'd' and 'mu'");
    const int d = doc.at("d").get<int>();
    require(d >= 1, ErrorCode::parse, "d must be >= 1");
    auto mu = doc.at("mu").get<std::vector<double>>();
    require(static_cast<int>(mu.size()) == d, ErrorCode::parse, "mu length must equal d");

    std::vector<Kernel> kernels(static_cast<size_t>(d) * d, Kernel::zero());
    if (doc.contains("kernels")) {
      for (const auto& entry : doc.at("kernels")) {
        const int i = entry.at("i").get<int>();
        const int j = entry.at("j").get<int>();
        require(i >= 1 && i <= d && j >= 1 && j <= d, ErrorCode::parse,
                "kernel indices must lie in 1..d");
        const std::string type = entry.at("type").get<std::string>();
        Kernel k;
        if (type == "exp") {
          k = Kernel::exponential(entry.at("alpha").get<double>(),
                                  entry.at("beta").get<double>());
        } else if (type == "grid") {
          k = Kernel::grid(entry.at("dt").get<double>(),
                           entry.at("values").get<std::vector<double>>());
        } else if (type == "zero") {
          k = Kernel::zero();
        } else {
          fail(ErrorCode::parse, "unknown kernel type '" + type + "'");
        }
        kernels[static_cast<size_t>(i - 1) * d + (j - 1)] = std::move(k);
      }
    }
    return HawkesModel(std::move(mu), std::move(kernels));
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("malformed model config: ") + e.what());
  }
}

HawkesModel load_model(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open model config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string model_to_json(const HawkesModel& model) {
  json doc;
  const int d = model.dim();
  doc["d"] = d;
  doc["mu"] = model.mu();
  json kernels = json::array();
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      const Kernel& k = model.kernel(i - 1, j - 1);
      if (k.is_zero()) continue;
      json entry{{"i", i}, {"j", j}};
      if (k.type() == Kernel::Type::exponential) {
        entry["type"] = "exp";
        entry["alpha"] = k.alpha();
        entry["beta"] = k.beta();
      } else {
        entry["type"] = "grid";
        entry["dt"] = k.grid_dt();
        entry["values"] = k.grid_values();
      }
      kernels.push_back(std::move(entry));
    }
  doc["kernels"] = std::move(kernels);
  return doc.dump(2);
}

void write_events_csv(const EventStream& stream, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, ErrorCode::io, "cannot open '" + path + "' for writing");
  std::fprintf(f, "# hawkes-events v1\n");
  std::fprintf(f, "# d=%d t_obs=%.17g burn_in=%.17g seed=%" PRIu64 " model_hash=%" PRIu64
                  " lineage=%d\n",
               stream.dim, stream.t_obs, stream.burn_in, stream.seed, stream.model_hash,
               stream.has_lineage ? 1 : 0);
  std::fprintf(f, "time,type,cluster_id,parent_row,generation\n");
  for (const Event& e : stream.events)
    std::fprintf(f, "%.17g,%d,%lld,%lld,%d\n", e.time, e.type, e.cluster_id, e.parent,
                 e.generation);
  require(std::fclose(f) == 0, ErrorCode::io, "write to '" + path + "' failed");
}

EventStream read_events_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open events file '" + path + "'");
  EventStream out;
  std::string line;
  require(std::getline(in, line) && line.rfind("# hawkes-events", 0) == 0, ErrorCode::parse,
          "missing hawkes-events header");
  require(std::getline(in, line) && line.rfind("# ", 0) == 0, ErrorCode::parse,
          "missing metadata line");
  {
    int lineage = 0;
    const int got = std::sscanf(line.c_str(),
                                "# d=%d t_obs=%lg burn_in=%lg seed=%" SCNu64
                                " model_hash=%" SCNu64 " lineage=%d",
                                &out.dim, &out.t_obs, &out.burn_in, &out.seed, &out.model_hash,
                                &lineage);
    require(got == 6, ErrorCode::parse, "malformed metadata line");
    out.has_lineage = lineage != 0;
  }
  require(std::getline(in, line) && line == "time,type,cluster_id,parent_row,generation",
          ErrorCode::parse, "missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Event e;
    const int got = std::sscanf(line.c_str(), "%lg,%d,%lld,%lld,%d", &e.time, &e.type,
                                &e.cluster_id, &e.parent, &e.generation);
    require(got == 5, ErrorCode::parse, "malformed event row: " + line);
    require(e.type >= 1 && e.type <= out.dim, ErrorCode::parse, "event type out of range");
    out.events.push_back(e);
  }
  for (size_t r = 1; r < out.events.size(); ++r)
    require(out.events[r - 1].time <= out.events[r].time, ErrorCode::parse,
            "events file is not sorted by time");
  return out;
}

}  // namespace hawkes
