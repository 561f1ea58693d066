#include "espde/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace espde {

void validate_game(const QuadraticGame& game) {
    const std::size_t n = game.players;
    if (n == 0) throw std::invalid_argument("game: needs at least one player");
    if (game.payoffs.size() != n) throw std::invalid_argument("game: one payoff per player required");
    if (!(game.epsilon > 0.0)) throw std::invalid_argument("game: epsilon must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = game.payoffs[i];
        if (p.owner != i) throw std::invalid_argument("game: payoff " + std::to_string(i) + " has wrong owner index");
        if (p.hessian.n != n || p.linear.size() != n)
            throw std::invalid_argument("game: payoff dimensions do not match player count");
        if (!(p.hessian(i, i) < 0.0))
            throw std::invalid_argument("game: player " + std::to_string(i) + " payoff is not strictly concave");
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (std::abs(p.hessian(j, k) - p.hessian(k, j)) > 1e-12 * (1.0 + std::abs(p.hessian(j, k))))
                    throw std::invalid_argument("game: payoff Hessian must be symmetric");
    }
}

double evaluate_payoff(const QuadraticPayoff& payoff, double epsilon,
                       const std::vector<double>& actions) {
    const std::size_t n = payoff.hessian.n;
    if (actions.size() != n || payoff.linear.size() != n)
        throw std::invalid_argument("evaluate_payoff: action vector length mismatch");
    double quad = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const double w = (j == k) ? 1.0 : epsilon;
            quad += w * payoff.hessian(j, k) * actions[j] * actions[k];
        }
    double lin = 0.0;
    for (std::size_t j = 0; j < n; ++j) lin += payoff.linear[j] * actions[j];
    return 0.5 * quad + lin + payoff.offset;
}

GameHessian assemble_hessian(const QuadraticGame& game) {
    validate_game(game);
    const std::size_t n = game.players;
    GameHessian h;
    h.matrix = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = (i == j) ? 1.0 : game.epsilon;
            h.matrix(i, j) = w * game.payoffs[i].hessian(i, j);
        }
    return h;
}

std::vector<double> nash_equilibrium(const QuadraticGame& game) {
    const GameHessian h = assemble_hessian(game);
    const std::size_t n = game.players;
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -game.payoffs[i].linear[i];
    try {
        return solve_linear(h.matrix, rhs);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("nash_equilibrium: no unique equilibrium (singular Hessian)");
    }
}

DominanceReport check_diagonal_dominance(const GameHessian& hessian) {
    const std::size_t n = hessian.matrix.n;
    DominanceReport rep;
    rep.pass = true;
    rep.margins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(hessian.matrix(i, j));
        rep.margins[i] = std::abs(hessian.matrix(i, i)) - off;
        if (!(rep.margins[i] > 0.0)) rep.pass = false;
    }
    return rep;
}

QuadraticGame scalar_map_game(double hessian, double optimizer, double peak_value) {
    if (!(hessian < 0.0))
        throw std::invalid_argument("scalar_map_game: maximization requires a negative Hessian");
    QuadraticGame g;
    g.players = 1;
    g.epsilon = 1.0;
    QuadraticPayoff p;
    p.owner = 0;
    p.hessian = Matrix(1);
    p.hessian(0, 0) = hessian;
    p.linear = {-hessian * optimizer};
    p.offset = peak_value + 0.5 * hessian * optimizer * optimizer;
    g.payoffs.push_back(std::move(p));
    return g;
}

} // namespace espde
