#include "liftlab/layout.hpp"

#include "liftlab/error.hpp"

namespace liftlab {

LiftedLayout::LiftedLayout(std::uint32_t blocks_, std::uint32_t m_) : blocks(blocks_), m(m_) {
    if (m < 2 || !std::has_single_bit(m))
        throw Error(Errc::NotPowerOfTwo, "lifting needs m = 2^ell with ell >= 1, got m = " + std::to_string(m));
    if (blocks == 0) throw Error(Errc::InvalidArgument, "lifting needs N >= 1");
    ell = static_cast<std::uint32_t>(std::countr_zero(m));
}

f2::Coord LiftedLayout::coord(std::uint32_t v) const {
    if (v >= vars()) throw Error(Errc::ShapeMismatch, "variable outside the lifted layout");
    const std::uint32_t block = v / stride();
    const std::uint32_t off = v % stride();
    return off < ell ? f2::xbit(block, off) : f2::ycoord(block, off - ell);
}

}  // namespace liftlab
