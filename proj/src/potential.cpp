#include "alang/potential.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "alang/special.hpp"

namespace alang {

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// ---- penalties --------------------------------------------------------

double Penalty::coord_value(double t) const {
    const double at = std::fabs(t);
    switch (kind) {
        case PenaltyKind::L1:
            return lambda * at;
        case PenaltyKind::SCAD:
            if (at <= lambda) return lambda * at;
            if (at <= a * lambda)
                return (2.0 * a * lambda * at - t * t - lambda * lambda) / (2.0 * (a - 1.0));
            return lambda * lambda * (a + 1.0) / 2.0;
        case PenaltyKind::MCP:
            if (at <= a * lambda) return lambda * at - t * t / (2.0 * a);
            return a * lambda * lambda / 2.0;
    }
    return 0.0;
}

double Penalty::value(std::span<const double> x) const {
    double s = 0.0;
    for (double t : x) s += coord_value(t);
    return s;
}

Penalty make_penalty(PenaltyKind kind, double lambda, double a) {
    if (!(lambda >= 0.0)) throw std::domain_error("penalty: lambda must be nonnegative");
    if (kind != PenaltyKind::L1 && !(a > 1.0))
        throw std::domain_error("penalty: a must exceed 1 for SCAD/MCP");
    return Penalty{kind, lambda, a};
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
    if (name == "l1" || name == "lasso") return PenaltyKind::L1;
    if (name == "scad") return PenaltyKind::SCAD;
    if (name == "mcp") return PenaltyKind::MCP;
    throw std::invalid_argument("unknown penalty kind: " + name);
}

double penalty_value(const Penalty& p, std::span<const double> x) { return p.value(x); }

double CompositePotential::value(std::span<const double> x) const {
    return f.value(x) + m0 * squared_norm(x) + g.value(x);
}

double CompositePotential::smooth_value(std::span<const double> x) const {
    return f.value(x) + m0 * squared_norm(x);
}

void CompositePotential::smooth_grad(std::span<const double> x, std::span<double> out) const {
    f.grad(x, out);
    if (m0 != 0.0)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += 2.0 * m0 * x[i];
}

// ---- Laplace targets ---------------------------------------------------

Potential laplace1d_potential(double b, double loc) {
    if (!(b > 0.0)) throw std::domain_error("laplace1d_potential: scale must be positive");
    Potential p;
    p.dim = 1;
    p.value = [b, loc](std::span<const double> x) { return std::fabs(x[0] - loc) / b; };
    // Subgradient selection: sign(x - loc)/b, 0 at the kink. Samplers in
    // this library consume smoothed surrogates; this path is test-only.
    p.grad = [b, loc](std::span<const double> x, std::span<double> out) {
        const double t = x[0] - loc;
        out[0] = (t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0)) / b;
    };
    p.meta.lipschitz_K = 1.0 / b;
    return p;
}

namespace {

struct SpdInfo {
    std::vector<double> inverse;  // row-major d*d
    double log_det = 0.0;
};

SpdInfo analyze_spd(const std::vector<double>& sigma, int d) {
    if (static_cast<int>(sigma.size()) != d * d)
        throw std::invalid_argument("Sigma: expected d*d entries");
    Eigen::MatrixXd S(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S(i, j) = sigma[i * d + j];
    if (!S.isApprox(S.transpose(), 1e-12))
        throw std::domain_error("Sigma must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("Sigma must be positive definite");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    SpdInfo info;
    info.inverse.resize(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) info.inverse[i * d + j] = inv(i, j);
    info.log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return info;
}

double quad_form(const std::vector<double>& m, std::span<const double> x, int d) {
    double q = 0.0;
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += m[i * d + j] * x[j];
        q += x[i] * row;
    }
    return q;
}

}  // namespace

Potential multivariate_laplace_potential_general(const std::vector<double>& sigma, int d) {
    SpdInfo info = analyze_spd(sigma, d);
    const double v = (2.0 - d) / 2.0;
    // log(2 / ((2 pi)^{d/2} |Sigma|^{1/2}))
    const double log_norm =
        std::log(2.0) - 0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * info.log_det;
    Potential p;
    p.dim = d;
    p.value = [inv = std::move(info.inverse), d, v, log_norm](std::span<const double> x) {
        double q = quad_form(inv, x, d);
        if (q < 1e-300) q = 1e-300;  // the density's singularity at 0 is integrable
        const double log_pdf =
            log_norm + 0.5 * v * std::log(0.5 * q) + std::log(bessel_k(v, std::sqrt(2.0 * q)));
        return -log_pdf;
    };
    return p;
}

Potential multivariate_laplace_potential(const std::vector<double>& sigma, int d) {
    if (d != 2) return multivariate_laplace_potential_general(sigma, d);
    // Bivariate K0 form, parameterized by (sigma1, sigma2, rho).
    const double s1 = std::sqrt(sigma[0]);
    const double s2 = std::sqrt(sigma[3]);
    const double rho = sigma[1] / (s1 * s2);
    if (!(s1 > 0.0) || !(s2 > 0.0) || !(std::fabs(rho) < 1.0) ||
        std::fabs(sigma[1] - sigma[2]) > 1e-12)
        throw std::domain_error("Sigma must be positive definite");
    const double one_m_r2 = 1.0 - rho * rho;
    const double log_norm = -std::log(std::numbers::pi * s1 * s2 * std::sqrt(one_m_r2));
    Potential p;
    p.dim = 2;
    p.value = [s1, s2, rho, one_m_r2, log_norm](std::span<const double> x) {
        double q = (x[0] * x[0] / (s1 * s1) - 2.0 * rho * x[0] * x[1] / (s1 * s2) +
                    x[1] * x[1] / (s2 * s2)) / one_m_r2;
        if (q < 1e-300) q = 1e-300;
        return -(log_norm + std::log(bessel_k(0.0, std::sqrt(2.0 * q))));
    };
    return p;
}

// ---- heavy tails -------------------------------------------------------

Potential heavy_tail_potential(double iota, int d, bool warn_nonintegrable) {
    if (warn_nonintegrable && !(iota > 1.0 + 0.5 * d))
        std::cerr << "heavy_tail_potential: iota = " << iota << " <= 1 + d/2 = "
                  << 1.0 + 0.5 * d << "; density is not integrable\n";
    Potential p;
    p.dim = d;
    p.value = [iota](std::span<const double> x) {
        return iota * std::log1p(squared_norm(x));
    };
    p.grad = [iota](std::span<const double> x, std::span<double> out) {
        const double c = 2.0 * iota / (1.0 + squared_norm(x));
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
    };
    return p;
}

StudentTPair student_t_pair(double nu, const std::vector<double>& mu,
                            const std::vector<double>& sigma, int d) {
    if (!(nu > 0.0)) throw std::domain_error("student_t_pair: nu must be positive");
    SpdInfo info = analyze_spd(sigma, d);

    Eigen::MatrixXd Sinv(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Sinv(i, j) = info.inverse[i * d + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sinv);
    const double kappa = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();

    StudentTPair pair;
    pair.beta = 0.5 * (d + nu) - 1.0;
    pair.condition_ok = (d + nu > 2.0 + d * kappa);

    auto qfn = [inv = info.inverse, mu, nu, d](std::span<const double> x) {
        std::vector<double> delta(d);
        for (int i = 0; i < d; ++i) delta[i] = x[i] - mu[i];
        return 1.0 + quad_form(inv, delta, d) / nu;
    };
    auto grad_qfn = [inv = info.inverse, mu, nu, d](std::span<const double> x,
                                                    std::span<double> out) {
        for (int i = 0; i < d; ++i) {
            double row = 0.0;
            for (int j = 0; j < d; ++j) row += inv[i * d + j] * (x[j] - mu[j]);
            out[i] = 2.0 * row / nu;
        }
    };

    const double expo_u = 0.5 * (d + nu);
    pair.U.dim = d;
    pair.U.value = [qfn, expo_u](std::span<const double> x) { return expo_u * std::log(qfn(x)); };
    pair.U.grad = [qfn, grad_qfn, expo_u, d](std::span<const double> x, std::span<double> out) {
        grad_qfn(x, out);
        const double c = expo_u / qfn(x);
        for (int i = 0; i < d; ++i) out[i] *= c;
    };

    const double beta = pair.beta;
    pair.U0.dim = d;
    pair.U0.value = [qfn, beta](std::span<const double> x) { return beta * std::log(qfn(x)); };
    pair.U0.grad = [qfn, grad_qfn, beta, d](std::span<const double> x, std::span<double> out) {
        grad_qfn(x, out);
        const double c = beta / qfn(x);
        for (int i = 0; i < d; ++i) out[i] *= c;
    };

    pair.q = qfn;
    pair.grad_q = grad_qfn;
    return pair;
}

// ---- logistic loss -----------------------------------------------------

namespace {

inline double softplus(double z) {
    // log(1 + e^z) without overflow
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

Potential logistic_loss(const std::vector<double>& X, const std::vector<double>& y,
                        int n, int d) {
    if (static_cast<int>(X.size()) != n * d || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("logistic_loss: X must be n*d and y length n");
    for (double label : y)
        if (label != 0.0 && label != 1.0)
            throw std::invalid_argument("logistic_loss: labels must be 0/1");

    Potential p;
    p.dim = d;
    // the data is copied into the closures so the potential owns its state
    p.value = [X, y, n, d](std::span<const double> w) {
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
            double z = 0.0;
            const double* row = &X[i * d];
            for (int j = 0; j < d; ++j) z += row[j] * w[j];
            loss += softplus(z) - y[i] * z;
        }
        return loss / n;
    };
    p.grad = [X, y, n, d](std::span<const double> w, std::span<double> out) {
        for (int j = 0; j < d; ++j) out[j] = 0.0;
        for (int i = 0; i < n; ++i) {
            double z = 0.0;
            const double* row = &X[i * d];
            for (int j = 0; j < d; ++j) z += row[j] * w[j];
            const double r = sigmoid(z) - y[i];
            for (int j = 0; j < d; ++j) out[j] += r * row[j];
        }
        for (int j = 0; j < d; ++j) out[j] /= n;
    };
    p.meta.smoothness = 0.25;  // caller should refine with the data's spectral norm
    return p;
}

// ---- deterministic penalty smoothing ------------------------------------

double smoothed_penalty_coord(const Penalty& p, double eps, double t) {
    const double lambda = p.lambda, a = p.a;
    const double se = std::sqrt(t * t + eps * eps);
    const double at = std::fabs(t);
    switch (p.kind) {
        case PenaltyKind::L1:
            return lambda * se;
        case PenaltyKind::SCAD: {
            const double sa = std::sqrt(a * a * lambda * lambda + eps * eps);
            const double sl = std::sqrt(lambda * lambda + eps * eps);
            if (at <= lambda) return lambda * se;
            if (at <= a * lambda)
                return (2.0 * lambda * sa * se - lambda * t * t -
                        lambda * (lambda * lambda + 2.0 * eps * eps)) / (2.0 * (sa - sl));
            return lambda * lambda * lambda * (a * a - 1.0) / (2.0 * (sa - sl));
        }
        case PenaltyKind::MCP: {
            const double sa = std::sqrt(a * a * lambda * lambda + eps * eps);
            if (at <= a * lambda) return lambda * se - lambda * t * t / (2.0 * sa);
            return lambda * (a * a * lambda * lambda + 2.0 * eps * eps) / (2.0 * sa);
        }
    }
    return 0.0;
}

double smoothed_penalty_coord_deriv(const Penalty& p, double eps, double t) {
    const double lambda = p.lambda, a = p.a;
    const double se = std::sqrt(t * t + eps * eps);
    const double at = std::fabs(t);
    switch (p.kind) {
        case PenaltyKind::L1:
            return lambda * t / se;
        case PenaltyKind::SCAD: {
            const double sa = std::sqrt(a * a * lambda * lambda + eps * eps);
            const double sl = std::sqrt(lambda * lambda + eps * eps);
            if (at <= lambda) return lambda * t / se;
            if (at <= a * lambda) return lambda * t * (sa / se - 1.0) / (sa - sl);
            return 0.0;
        }
        case PenaltyKind::MCP: {
            const double sa = std::sqrt(a * a * lambda * lambda + eps * eps);
            if (at <= a * lambda) return lambda * t / se - lambda * t / sa;
            return 0.0;
        }
    }
    return 0.0;
}

Potential smoothed_penalty(const Penalty& p, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("smoothed_penalty: eps must be positive");
    Potential out;
    out.dim = 0;  // any dimension
    out.value = [p, eps](std::span<const double> x) {
        double s = 0.0;
        for (double t : x) s += smoothed_penalty_coord(p, eps, t);
        return s;
    };
    out.grad = [p, eps](std::span<const double> x, std::span<double> g) {
        for (std::size_t i = 0; i < x.size(); ++i)
            g[i] = smoothed_penalty_coord_deriv(p, eps, x[i]);
    };
    return out;
}

}  // namespace alang
