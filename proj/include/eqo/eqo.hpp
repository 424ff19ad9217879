#ifndef EQO_EQO_HPP
#define EQO_EQO_HPP

#include "eqo/appendix_checks.hpp"
#include "eqo/catalog.hpp"
#include "eqo/closed_form_1d.hpp"
#include "eqo/gaussian_oracle.hpp"
#include "eqo/matrix_kernel.hpp"
#include "eqo/reordering.hpp"
#include "eqo/types.hpp"

#endif  // EQO_EQO_HPP
