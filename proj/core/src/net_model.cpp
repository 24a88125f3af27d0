#include "reusemap/net_model.hpp"

#include <algorithm>

#include "reusemap/errors.hpp"

namespace reusemap {

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kFc: return "fc";
    case LayerKind::kDepthwise: return "depthwise-conv";
  }
  return "?";
}

const char* to_string(DataType type) {
  switch (type) {
    case DataType::kIfm: return "ifm";
    case DataType::kWgh: return "wgh";
    case DataType::kOfm: return "ofm";
  }
  return "?";
}

void LayerShape::validate() const {
  auto fail = [&](const std::string& what) {
    throw InvalidArgument("layer '" + name + "': " + what);
  };
  if (H < 1 || W < 1 || I < 1 || P < 1 || Q < 1 || J < 1 || str < 1)
    fail("all dimensions must be >= 1");
  if (P > H || Q > W) fail("filter larger than ifmap");
  if (bit_ifm < 1 || bit_wgh < 1 || bit_ofm < 1) fail("bitwidths must be >= 1");
  if (kind == LayerKind::kFc && (P != 1 || Q != 1 || H != 1 || W != 1 || str != 1))
    fail("fc layers need H = W = P = Q = str = 1");
  if (kind == LayerKind::kDepthwise && I != J)
    fail("depthwise layers need I == J");
}

LayerShape make_fc(std::string name, std::int64_t in, std::int64_t out, int bits) {
  LayerShape l;
  l.name = std::move(name);
  l.kind = LayerKind::kFc;
  l.I = in;
  l.J = out;
  l.bit_ifm = l.bit_wgh = l.bit_ofm = bits;
  return l;
}

void NetworkModel::validate() const {
  if (layers.empty()) throw InvalidArgument("network '" + name + "' has no layers");
  for (const auto& l : layers) l.validate();
}

OutputDims output_dims(const LayerShape& layer) {
  if (layer.kind == LayerKind::kFc) return {1, 1};
  return {ceil_div(layer.H - layer.P + 1, layer.str),
          ceil_div(layer.W - layer.Q + 1, layer.str)};
}

ReuseFactors reuse_factors(const LayerShape& layer) {
  const auto s = layer.str;
  // A depthwise filter is a single-channel convolution: one filter touches
  // each input element, and each output sums P*Q products.
  const std::int64_t filters_per_input =
      layer.kind == LayerKind::kDepthwise ? 1 : layer.J;
  ReuseFactors rf;
  rf.rf_ifm = ceil_div(layer.P, s) * ceil_div(layer.Q, s) * filters_per_input;
  rf.rf_wgh = ceil_div(layer.H - layer.P + 1, s) * ceil_div(layer.W - layer.Q + 1, s);
  rf.rf_ofm = layer.P * layer.Q * layer.effective_depth();
  return rf;
}

const std::array<ReusePriorityOrder, 6>& all_priority_orders() {
  using D = DataType;
  static const std::array<ReusePriorityOrder, 6> kOrders{{
      {{D::kIfm, D::kWgh, D::kOfm}},
      {{D::kIfm, D::kOfm, D::kWgh}},
      {{D::kWgh, D::kIfm, D::kOfm}},
      {{D::kWgh, D::kOfm, D::kIfm}},
      {{D::kOfm, D::kIfm, D::kWgh}},
      {{D::kOfm, D::kWgh, D::kIfm}},
  }};
  return kOrders;
}

ReusePriorityOrder reuse_priority_order(const LayerShape& layer) {
  const auto rf = reuse_factors(layer);
  std::array<std::pair<std::int64_t, DataType>, 3> v{{
      {rf.rf_ifm, DataType::kIfm},
      {rf.rf_wgh, DataType::kWgh},
      {rf.rf_ofm, DataType::kOfm},
  }};
  // Stable sort keeps ifm > wgh > ofm among equal factors.
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  return {{v[0].second, v[1].second, v[2].second}};
}

std::string to_string(const ReusePriorityOrder& order) {
  std::string s;
  for (std::size_t k = 0; k < order.order.size(); ++k) {
    if (k) s += '>';
    s += to_string(order.order[k]);
  }
  return s;
}

}  // namespace reusemap
