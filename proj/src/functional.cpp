#include "bvbfv/functional.hpp"

namespace bvbfv {

AuxPair free_pair(const ConfigPtr& cfg, Mask used) {
  const int begin = cfg->aux_begin;
  const int end = begin + 2 * kAuxPairs;
  for (int k = begin; k + 1 < end && k + 1 < cfg->num_generators; k += 2) {
    if (cfg->tag(k) + cfg->tag(k + 1) != 0) continue;
    const Mask m = (Mask{1} << k) | (Mask{1} << (k + 1));
    if ((used & m) == 0) return {k, k + 1};
  }
  throw Error(ErrorKind::ConfigMismatch, "no free scratch generator pair for a directional derivative");
}

int free_shift(const ConfigPtr& cfg, Mask used) {
  for (int k = cfg->aux_begin + 2 * kAuxPairs; k < cfg->num_generators; ++k) {
    if (cfg->tag(k) == -1 && (used & (Mask{1} << k)) == 0) return k;
  }
  throw Error(ErrorKind::ConfigMismatch, "no free scratch generator for a degree shift");
}

}  // namespace bvbfv
