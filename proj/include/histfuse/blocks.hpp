#ifndef HISTFUSE_BLOCKS_HPP
#define HISTFUSE_BLOCKS_HPP

#include "histfuse/matrix.hpp"

namespace histfuse {

// A (p+q)x(p+q) symmetric matrix partitioned into theta/eta blocks.
struct VarianceBlocks {
    la::SymMatrix tt;  // p x p
    la::Matrix te;     // p x q
    la::SymMatrix ee;  // q x q

    VarianceBlocks() = default;
    VarianceBlocks(la::SymMatrix tt_, la::Matrix te_, la::SymMatrix ee_);

    std::size_t p() const noexcept { return tt.dim(); }
    std::size_t q() const noexcept { return ee.dim(); }

    la::SymMatrix assemble() const { return la::assemble_symmetric(tt, te, ee); }
    static VarianceBlocks split(const la::SymMatrix& m, std::size_t p);

    // assembled matrix must be PSD: min eigenvalue >= -tol * scale
    void validate_psd(double tol = 1e-9) const;
};

}  // namespace histfuse

#endif
