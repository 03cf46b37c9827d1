#include "panicsim/panel.hpp"

namespace panicsim {

ReturnsPanel ReturnsPanel::with_step_labels(Matrix values) {
    ReturnsPanel p;
    p.values = std::move(values);
    p.dates.reserve(p.n_times());
    for (std::size_t t = 0; t < p.n_times(); ++t) p.dates.push_back(std::to_string(t));
    p.tickers.reserve(p.n_assets());
    for (std::size_t k = 0; k < p.n_assets(); ++k) p.tickers.push_back("A" + std::to_string(k));
    return p;
}

}  // namespace panicsim
