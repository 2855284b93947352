#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sqlpp/value.hpp"

namespace testsupport {

using sqlpp::Value;

// Small random values for property tests. Deterministic per seed.
class ValueGen {
 public:
  explicit ValueGen(uint32_t seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  int pick(int n) { return static_cast<int>(rng_() % static_cast<uint32_t>(n)); }

  std::string name() {
    static const char* names[] = {"a", "b", "c", "gas", "num", "co", "no2", "val"};
    return names[pick(8)];
  }

  Value scalar() {
    switch (pick(6)) {
      case 0: return Value::integer(pick(5));
      case 1: return Value::real(pick(5) * 0.5);
      case 2: return Value::boolean(pick(2) == 0);
      case 3: return Value::string(name());
      case 4: return Value::null();
      default: return Value::enriched("ts", {Value::integer(pick(3))});
    }
  }

  Value value(int depth = 2) {
    if (depth <= 0) return scalar();
    switch (pick(7)) {
      case 0: {
        std::vector<Value> elems;
        int n = pick(4);
        for (int i = 0; i < n; ++i) elems.push_back(value(depth - 1));
        return Value::array(std::move(elems));
      }
      case 1: {
        std::vector<Value> elems;
        int n = pick(4);
        for (int i = 0; i < n; ++i) elems.push_back(value(depth - 1));
        return Value::bag(std::move(elems));
      }
      case 2: {
        std::vector<Value::Attr> attrs;
        int n = pick(4);
        for (int i = 0; i < n; ++i) {
          std::string attr_name = name() + std::to_string(i);
          attrs.push_back({attr_name, value(depth - 1)});
        }
        return Value::tuple(std::move(attrs));
      }
      default:
        return scalar();
    }
  }

 private:
  std::mt19937 rng_;
};

// Independent oracle for bag equality: search for a bijection between the
// element lists matching elements pairwise.
inline bool bag_bijection_exists(const std::vector<Value>& xs, const std::vector<Value>& ys) {
  if (xs.size() != ys.size()) return false;
  std::vector<size_t> perm(ys.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool all = true;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!sqlpp::structural_equal(xs[i], ys[perm[i]])) {
        all = false;
        break;
      }
    }
    if (all) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace testsupport
