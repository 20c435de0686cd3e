#pragma once

#include "liftlab/bitvec.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/oracles/oracles.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace liftlab::support {

inline std::uint32_t mask_of(const BitVec& v) {
    std::uint32_t m = 0;
    for (auto i = v.first(); i < v.size(); i = v.next(i)) m |= 1U << i;
    return m;
}

inline oracle::Eq to_oracle(const f2::ParityEq& e) { return {mask_of(e.support), e.rhs}; }

inline std::vector<oracle::Eq> to_oracle(const f2::AffineSystem& s) {
    std::vector<oracle::Eq> out;
    for (std::size_t r = 0; r < s.codim(); ++r) out.push_back(to_oracle(s.equation(r)));
    return out;
}

inline oracle::PointList points_of(const PointerSet& s) {
    oracle::PointList out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.member(i));
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data(const std::string& name) { return std::string(LIFTLAB_TEST_DATA) + "/" + name; }

}  // namespace liftlab::support
