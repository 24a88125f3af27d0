#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "reusemap/access_model.hpp"
#include "reusemap/dram_map.hpp"
#include "reusemap/tiling.hpp"

namespace reusemap {

enum class Op : std::uint8_t { kRead, kWrite };

struct DramRequest {
  Op op = Op::kRead;
  PhysicalAddress addr;  // first column of the request
  std::int32_t burst = 1;  // valid words carried, at most the burst length
  DataType type = DataType::kIfm;
  std::int32_t layer = 0;
  std::int64_t tile = 0;  // canonical tile id within (layer, type)

  bool operator==(const DramRequest&) const = default;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void consume(const DramRequest& r) = 0;
};

struct RequestTrace {
  std::vector<DramRequest> requests;
  bool burst = true;
};

class TraceCollector final : public TraceSink {
 public:
  explicit TraceCollector(bool burst) { trace_.burst = burst; }
  void consume(const DramRequest& r) override { trace_.requests.push_back(r); }
  RequestTrace& trace() { return trace_; }

 private:
  RequestTrace trace_;
};

class TraceCounter final : public TraceSink {
 public:
  explicit TraceCounter(bool burst) : burst_(burst) {}
  void consume(const DramRequest& r) override;
  const AccessCounts& counts() const { return counts_; }

 private:
  bool burst_;
  AccessCounts counts_;
};

// Writes the text format, one request per line.
class TraceWriter final : public TraceSink {
 public:
  explicit TraceWriter(std::ostream& os) : os_(os) {}
  void consume(const DramRequest& r) override;

 private:
  std::ostream& os_;
};

class TeeSink final : public TraceSink {
 public:
  explicit TeeSink(std::vector<TraceSink*> sinks) : sinks_(std::move(sinks)) {}
  void consume(const DramRequest& r) override {
    for (TraceSink* s : sinks_) s->consume(r);
  }

 private:
  std::vector<TraceSink*> sinks_;
};

struct TraceOptions {
  ObjectiveMode mode = ObjectiveMode::kReuseAware;
  bool burst = true;
};

// Walks the nest and streams every DRAM request of one layer into `sink`.
// Blocks are taken from the allocator's (layer, type) regions the first time
// each tile is fetched.
void generate_layer_trace(std::int32_t layer, const TilingPlan& plan, const Schedule& schedule,
                          RegionAllocator& alloc, const TraceOptions& opts, TraceSink& sink);

RequestTrace generate_layer_trace(std::int32_t layer, const TilingPlan& plan,
                                  const Schedule& schedule, RegionAllocator& alloc,
                                  const TraceOptions& opts);

// Words by op and type. For a burst trace requests_burst is the request
// count; for a non-burst trace requests_nonburst is, and requests_burst is 0.
AccessCounts count_trace(const RequestTrace& trace);

// Compares word totals and the request count of the given mode.
bool counts_match(const AccessCounts& model, const AccessCounts& traced, bool burst);

// "RD|WR channel rank chip bank row column burst layer:type:tile"
void write_trace(std::ostream& os, const RequestTrace& trace);
RequestTrace read_trace(std::istream& is);  // throws InvalidArgument

}  // namespace reusemap
