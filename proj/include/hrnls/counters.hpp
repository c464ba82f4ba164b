#pragma once

#include <cstdint>
#include <limits>

namespace hrnls {

/// Run statistics. Node counts are cell counts N.
struct RunCounters {
    std::int64_t nhr = 0;  ///< h-refinements (changes of N)
    std::int64_t nmax = 0; ///< largest N used
    std::int64_t nmin = std::numeric_limits<std::int64_t>::max(); ///< smallest N used
    std::int64_t nstp = 0; ///< accepted time steps
    std::int64_t jacs = 0; ///< Jacobian evaluations/factorisations
    std::int64_t bs = 0;   ///< triangular back-solves
    std::int64_t etf = 0;  ///< step halvings after a failed ERR/mesherr test
    std::int64_t ctf = 0;  ///< Newton convergence failures
    std::int64_t equidistribution_warnings = 0; ///< de Boor hit its iteration cap

    void observe_cells(std::int64_t n) noexcept {
        if (n > nmax) nmax = n;
        if (n < nmin) nmin = n;
    }

    bool operator==(const RunCounters&) const = default;
};

} // namespace hrnls
