#pragma once

#include <cstddef>
#include <vector>

#include "espde/linalg.hpp"

namespace espde {

/// One player's quadratic payoff
///   J_i(Theta) = 1/2 sum_jk eps_jk H_jk Theta_j Theta_k + sum_j h_j Theta_j + c
/// where eps_jj = 1 and eps_jk = eps (the game coupling) off the diagonal.
/// `hessian` must be symmetric with a strictly negative own-action curvature H_ii.
struct QuadraticPayoff {
    std::size_t owner = 0;        // player index i
    Matrix hessian;               // H^i_{jk}, payoff units per action^2
    std::vector<double> linear;   // h^i_j, payoff units per action
    double offset = 0.0;          // c_i, payoff units
};

struct QuadraticGame {
    std::size_t players = 0;
    std::vector<QuadraticPayoff> payoffs;  // exactly one per player index
    double epsilon = 1.0;                  // off-diagonal coupling weight, in (0, 1]
};

/// Row i holds player i's own first-order coefficients [eps_i1 H^i_i1 ... eps_iN H^i_iN].
struct GameHessian {
    Matrix matrix;
};

struct DominanceReport {
    bool pass = false;
    std::vector<double> margins;  // |H_ii| - sum_{j != i} |H_ij| per row, absolute units
};

/// Validates symmetry, concavity and indexing of a game; throws std::invalid_argument.
void validate_game(const QuadraticGame& game);

double evaluate_payoff(const QuadraticPayoff& payoff, double epsilon,
                       const std::vector<double>& actions);

GameHessian assemble_hessian(const QuadraticGame& game);

/// Unique Nash equilibrium theta* = -H^{-1} h with h_i = h^i_i.
/// Throws std::runtime_error("no unique equilibrium") when the Hessian is singular.
std::vector<double> nash_equilibrium(const QuadraticGame& game);

DominanceReport check_diagonal_dominance(const GameHessian& hessian);

/// Convenience: a scalar quadratic map y* + H/2 (theta - theta*)^2 expressed as a 1-player game.
QuadraticGame scalar_map_game(double hessian, double optimizer, double peak_value);

} // namespace espde
