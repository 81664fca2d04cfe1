// Serial against OpenMP replica batches for the main Monte Carlo kernels.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "cpphase/models.hpp"
#include "cpphase/parallel.hpp"
#include "cpphase/phase.hpp"
#include "cpphase/rwre.hpp"
#include "cpphase/star.hpp"

using namespace cpphase;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void compare(const std::string& name, const std::function<void(Execution)>& kernel) {
  const double s = seconds([&] { kernel(Execution::serial); });
  const double p = seconds([&] { kernel(Execution::parallel); });
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  threads %d  speedup %.2f\n", name.c_str(), s, p, thread_cap(),
              s / p);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t replicas = argc > 1 ? std::stoul(argv[1]) : 400;
  const ModelSpec lrp = LrpSpec{};
  compare("survival lrp n=2001 l=1", [&](Execution ex) {
    SurvivalOptions o;
    o.execution = ex;
    survival_probability(lrp, 1.0, 2001, 100.0, replicas, 7, o);
  });
  compare("omega path block size 8", [&](Execution ex) {
    OmegaOptions o;
    o.execution = ex;
    estimate_omega(path_block(8), 0.5, replicas * 10, 7, o);
  });
  compare("star k=200 persist", [&](Execution ex) {
    StarConfig c;
    c.k = 200;
    c.replicas = replicas;
    c.execution = ex;
    star_persist_from_K(c);
  });
  return 0;
}
