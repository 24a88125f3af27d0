#include "reusemap/sram_map.hpp"

#include <ostream>

#include "reusemap/errors.hpp"

namespace reusemap {

void SramGeometry::validate() const {
  if (banks < 1 || rows_per_bank < 1 || word_bytes < 1)
    throw InvalidArgument("SRAM geometry counts must be >= 1");
  if (banks * rows_per_bank * word_bytes != capacity_bytes)
    throw InvalidArgument("SRAM banks * rows * word bytes must equal the capacity");
}

SramGeometry SramGeometry::for_capacity(std::int64_t capacity_bytes, std::int64_t banks,
                                        std::int64_t word_bytes) {
  SramGeometry g{banks, capacity_bytes / (banks * word_bytes), word_bytes, capacity_bytes};
  g.validate();
  return g;
}

double SramPlacement::unused_row_fraction(const SramGeometry& geom) const {
  std::vector<char> used(static_cast<std::size_t>(geom.banks * geom.rows_per_bank), 0);
  for (const auto& s : assignments) used[static_cast<std::size_t>(s.bank * geom.rows_per_bank + s.row)] = 1;
  std::int64_t n = 0;
  for (char u : used) n += u;
  return 1.0 - static_cast<double>(n) / static_cast<double>(used.size());
}

SramPlacement place_tile(std::int64_t n_words, const SramGeometry& geom) {
  geom.validate();
  if (n_words < 0 || n_words > geom.banks * geom.rows_per_bank)
    throw BufferOverflow(std::to_string(n_words) + " words exceed the " +
                         std::to_string(geom.capacity_bytes) + "-byte buffer");
  SramPlacement p;
  p.assignments.reserve(static_cast<std::size_t>(n_words));
  for (std::int64_t k = 0; k < n_words; ++k)
    p.assignments.push_back({k % geom.banks, k / geom.banks});
  return p;
}

std::vector<std::int64_t> assign_filters(std::int64_t Tj, std::int64_t banks) {
  if (Tj < 1 || banks < 1) throw InvalidArgument("filter count and banks must be >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(Tj));
  for (std::int64_t j = 0; j < Tj; ++j) out[static_cast<std::size_t>(j)] = j % banks;
  return out;
}

PlanPlacement place_plan(const TilingPlan& plan, const SramGeometry& ifm_geom,
                         const SramGeometry& wgh_geom, const SramGeometry& ofm_geom) {
  const auto words = [](std::int64_t elems, int bits, const SramGeometry& g) {
    return ceil_div(elems * bits, g.word_bytes * 8);
  };
  const auto& l = plan.layer;
  PlanPlacement out;
  out.ifm = place_tile(words(plan.ifm_h.max_span() * plan.ifm_w.max_span() *
                                 plan.ifm_c.max_span(), l.bit_ifm, ifm_geom),
                       ifm_geom);
  out.wgh = place_tile(words(l.P * l.Q * plan.wgh_i.max_span() * plan.wgh_j.max_span(),
                             l.bit_wgh, wgh_geom),
                       wgh_geom);
  out.wgh.filter_to_bank = assign_filters(plan.wgh_j.max_span(), wgh_geom.banks);
  out.ofm = place_tile(words(plan.ofm_m.max_span() * plan.ofm_n.max_span() *
                                 plan.ofm_j.max_span(), l.bit_ofm, ofm_geom),
                       ofm_geom);
  return out;
}

void write_placement_csv(std::ostream& os, const SramPlacement& p) {
  os << "word_index,bank,row\n";
  for (std::size_t k = 0; k < p.assignments.size(); ++k)
    os << k << ',' << p.assignments[k].bank << ',' << p.assignments[k].row << '\n';
}

}  // namespace reusemap
