#include "adiaudit/types.hpp"

#include "adiaudit/errors.hpp"

namespace adiaudit {

TimeGrid TimeGrid::uniform(double t_end, int n_steps) {
    if (!(t_end > 0.0)) throw ParameterError("time grid: t_end must be positive");
    if (n_steps < 2) throw ParameterError("time grid: need at least 2 steps");
    return TimeGrid{t_end, n_steps};
}

}  // namespace adiaudit
