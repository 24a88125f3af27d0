#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace reusemap {

enum class LayerKind { kConv, kFc, kDepthwise };

enum class DataType : std::uint8_t { kIfm = 0, kWgh = 1, kOfm = 2 };

const char* to_string(LayerKind kind);
const char* to_string(DataType type);

// One CONV/FC layer. Padding is not modeled: H and W are the extents the
// window actually slides over. Depthwise layers carry I == J channels; each
// filter reads exactly one input channel.
struct LayerShape {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  std::int64_t H = 1, W = 1, I = 1;
  std::int64_t P = 1, Q = 1, J = 1;
  std::int64_t str = 1;
  int bit_ifm = 16, bit_wgh = 16, bit_ofm = 16;

  // Throws InvalidArgument on violated invariants.
  void validate() const;

  // Per-filter input depth: 1 for depthwise layers, I otherwise.
  std::int64_t effective_depth() const {
    return kind == LayerKind::kDepthwise ? 1 : I;
  }

  bool operator==(const LayerShape&) const = default;
};

LayerShape make_fc(std::string name, std::int64_t in, std::int64_t out,
                   int bits = 16);

struct NetworkModel {
  std::string name;
  std::vector<LayerShape> layers;

  std::size_t size() const { return layers.size(); }
  void validate() const;
};

struct OutputDims {
  std::int64_t M = 1, N = 1;
  bool operator==(const OutputDims&) const = default;
};

OutputDims output_dims(const LayerShape& layer);

struct ReuseFactors {
  std::int64_t rf_ifm = 1, rf_wgh = 1, rf_ofm = 1;
  bool operator==(const ReuseFactors&) const = default;
};

ReuseFactors reuse_factors(const LayerShape& layer);

// Highest reuse first; always a permutation of the three data types.
struct ReusePriorityOrder {
  std::array<DataType, 3> order{DataType::kIfm, DataType::kWgh, DataType::kOfm};
  bool operator==(const ReusePriorityOrder&) const = default;
};

// All six orders, in table order (ifm-first rows, then wgh, then ofm).
const std::array<ReusePriorityOrder, 6>& all_priority_orders();

ReusePriorityOrder reuse_priority_order(const LayerShape& layer);

std::string to_string(const ReusePriorityOrder& order);

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace reusemap
