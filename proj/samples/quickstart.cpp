// Small tour of the library: one dependence value, one stage-survival
// point, a short Monte Carlo run and a Weibull fit.

#include <iostream>
#include <vector>

#include "archlab/archlab.hpp"

int main() {
  using namespace archlab;

  const SerialTwoModel serial(parse_distribution("exp:u=1"), 0.5);
  const auto rec = dependence_record(serial, 1.0);
  std::cout << "serial exp(1), tau=1: difference=" << format_number(rec.difference) << " (" << to_string(rec.sign)
            << ")\n";

  const ParallelTwoModel parallel{Distribution::weibull(2.0, 1.0)};
  const auto gap = stage_survival_gap(parallel, 0.5, 1.0);
  std::cout << "parallel weibull(2,1), t=0.5 Ta=1: gap=" << format_number(gap.gap)
            << " expr4=" << format_number(gap.expr4) << '\n';

  const auto mc = run_theorem1_mc(100000);
  std::cout << "p=1/2 bracket positive fraction: " << mc.to_json() << '\n';

  const auto dist = Distribution::weibull(0.7, 2.0);
  std::vector<double> data;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    RngStream rng(kDefaultSeed, i);
    data.push_back(sample(dist, rng));
  }
  std::cout << "fit: " << to_json(weibull_mle(data), data.size(), kDefaultSeed) << '\n';
}
