#pragma once

/**
 * @file problem.hpp
 * @brief Reduced distance-to-stratum problems handed to the hierarchy.
 */

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "strata/moment.hpp"

namespace strata::mech {

struct DistanceProblem {
    std::string stratum;
    Polynomial f;                        // squared distance in the reduced variables
    std::vector<Constraint> constraints;  // stratum equations (no ball)
    std::vector<std::string> variables;
    double offset = 0.0;          // Delta^2 = offset + min f
    double reference_norm = 0.0;  // ||T0|| for the relative distance
    Eigen::VectorXd x_ref;        // a point of the stratum, used for the ball constant
    double variable_scale = 1.0;  // suggested scaling for the relaxation
};

}  // namespace strata::mech
