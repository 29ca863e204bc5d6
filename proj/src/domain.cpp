#include "polydet/domain.hpp"

namespace polydet {

Domain make_domain(LatticeRegion region, std::vector<Puncture> punctures, CutDirection dir) {
  DomainGraph graph = build_graph(region);
  PunctureSet sigma(region, std::move(punctures));
  FlatConnection conn = build_connection(graph, sigma, dir);
  return Domain{std::move(region), std::move(graph), std::move(sigma), std::move(conn)};
}

Domain make_scaled_domain(const LatticeRegion& base, std::int64_t factor,
                          const std::vector<Puncture>& base_punctures, CutDirection dir) {
  LatticeRegion scaled = base.scaled(factor);
  auto punctures = scale_punctures(base_punctures, factor, base, scaled);
  return make_domain(std::move(scaled), std::move(punctures), dir);
}

}  // namespace polydet
