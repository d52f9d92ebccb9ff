#include "subfou/quadrature.hpp"

namespace subfou {

void validate(const QuadratureSpec& q) {
    if (q.panels < 1 || q.singular_panels < 1) throw DomainError("quadrature panels must be positive");
    if (q.refinement_factor < 2) throw DomainError("refinement factor must be >= 2");
    if (!(q.rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (q.max_refinements < 1) throw DomainError("max_refinements must be >= 1");
}

} // namespace subfou
