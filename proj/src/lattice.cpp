#include "llt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace llt {

namespace {

double stable_sum(const std::vector<double>& v) {
    // Kahan summation; mass ledgers sit at 1e-12 tolerances after 2^14 steps.
    double s = 0.0, c = 0.0;
    for (double x : v) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace

LatticeDistribution::LatticeDistribution(LatticeSpec spec, long long k_min,
                                         std::vector<double> mass, double lost_mass)
    : spec_(spec), k_min_(k_min), mass_(std::move(mass)), lost_mass_(lost_mass) {
    if (!(spec_.D > 0.0)) throw InvalidArgument("lattice span D must be > 0");
    if (mass_.empty()) throw InvalidArgument("empty mass vector");
    for (double m : mass_)
        if (!(m >= 0.0)) throw InvalidArgument("negative or NaN mass entry");
    if (lost_mass_ < 0.0) throw InvalidArgument("negative lost_mass");
    if (lost_mass_ > kLostMassBudget)
        throw MassBudgetExceeded("lost_mass " + std::to_string(lost_mass_) + " over budget");

    // Keep the range tight: boundary entries must be positive.
    std::size_t lo = 0, hi = mass_.size();
    while (lo < hi && mass_[lo] == 0.0) ++lo;
    while (hi > lo && mass_[hi - 1] == 0.0) --hi;
    if (lo == hi) throw InvalidArgument("all-zero mass vector");
    if (lo > 0 || hi < mass_.size()) {
        mass_.erase(mass_.begin() + static_cast<std::ptrdiff_t>(hi), mass_.end());
        mass_.erase(mass_.begin(), mass_.begin() + static_cast<std::ptrdiff_t>(lo));
        k_min_ += static_cast<long long>(lo);
    }

    double total = stable_sum(mass_) + lost_mass_;
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument("mass + lost_mass not normalized: total=" + std::to_string(total));
}

double LatticeDistribution::total_mass() const { return stable_sum(mass_); }

LatticeDistribution make_point_mass(double v0, double D) {
    return LatticeDistribution({v0, D}, 0, {1.0});
}

LatticeDistribution make_fair_coin() { return LatticeDistribution({0.0, 1.0}, 0, {0.5, 0.5}); }

LatticeDistribution make_two_point(double p1, double v0, double D) {
    if (!(p1 > 0.0 && p1 < 1.0)) throw InvalidArgument("two-point mass must be in (0,1)");
    return LatticeDistribution({v0, D}, 0, {1.0 - p1, p1});
}

LatticeDistribution make_uniform(int b, long long first_offset, double v0, double D) {
    if (b < 1) throw InvalidBlock("uniform width must be >= 1");
    std::vector<double> m(static_cast<std::size_t>(b), 1.0 / b);
    return LatticeDistribution({v0, D}, first_offset, std::move(m));
}

double theta_characteristic(const LatticeDistribution& d) {
    const auto& f = d.mass();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) s += std::min(f[i], f[i + 1]);
    return s;
}

double smoothness_delta(const LatticeDistribution& d) {
    const auto& f = d.mass();
    double s = f.front() + f.back();  // jumps at both ends of the support
    for (std::size_t i = 0; i + 1 < f.size(); ++i) s += std::abs(f[i + 1] - f[i]);
    return s;
}

Moments moments(const LatticeDistribution& d) {
    // Work in offset coordinates, then map affinely; avoids cancellation when
    // v0 dwarfs the support.
    const auto& f = d.mass();
    double mean_k = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) mean_k += f[i] * static_cast<double>(i);
    double var_k = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double c = static_cast<double>(i) - mean_k;
        var_k += f[i] * c * c;
    }
    double D = d.spec().D;
    double mean = d.spec().v0 + D * (mean_k + static_cast<double>(d.k_min()));
    return {mean, D * D * var_k};
}

LatticeDistribution convolve(const LatticeDistribution& a, const LatticeDistribution& b) {
    if (a.spec().D != b.spec().D)
        throw IncompatibleLattice("convolve: spans differ (" + std::to_string(a.spec().D) +
                                  " vs " + std::to_string(b.spec().D) + ")");
    const auto& fa = a.mass();
    const auto& fb = b.mass();
    std::vector<double> out(fa.size() + fb.size() - 1, 0.0);
    // Dense direct convolution; supports in this artifact stay small enough
    // that the transform-based path is never worth its rounding analysis.
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const double ai = fa[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < fb.size(); ++j) out[i + j] += ai * fb[j];
    }

    double total = stable_sum(out);
    double threshold = LatticeDistribution::kPruneRel * total;
    std::size_t lo = 0, hi = out.size();
    double pruned = 0.0;
    while (lo < hi && out[lo] < threshold) pruned += out[lo++];
    while (hi > lo && out[hi - 1] < threshold) pruned += out[--hi];
    if (lo == hi) throw InvalidArgument("convolution pruned to nothing");

    double lost = a.lost_mass() + b.lost_mass() + pruned;
    if (lost > LatticeDistribution::kLostMassBudget)
        throw MassBudgetExceeded("cumulative lost_mass " + std::to_string(lost) +
                                 " exceeds 1e-12");
    std::vector<double> kept(out.begin() + static_cast<std::ptrdiff_t>(lo),
                             out.begin() + static_cast<std::ptrdiff_t>(hi));
    LatticeSpec spec{a.spec().v0 + b.spec().v0, a.spec().D};
    return LatticeDistribution(spec, a.k_min() + b.k_min() + static_cast<long long>(lo),
                               std::move(kept), lost);
}

double tv_distance(const LatticeDistribution& a, const LatticeDistribution& b) {
    if (a.spec().D != b.spec().D) throw IncompatibleLattice("tv_distance: spans differ");
    long long lo = std::min(a.k_min(), b.k_min());
    long long hi = std::max(a.k_max(), b.k_max());
    double s = 0.0;
    for (long long k = lo; k <= hi; ++k) s += std::abs(a.pmf(k) - b.pmf(k));
    return 0.5 * s;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string to_text(const LatticeDistribution& d) {
    std::ostringstream os;
    os << "lattice v0=" << fmt17(d.spec().v0) << " D=" << fmt17(d.spec().D)
       << " kmin=" << d.k_min() << "\n";
    for (double m : d.mass()) os << fmt17(m) << "\n";
    return os.str();
}

LatticeDistribution from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw ParseError("empty distribution text");
    double v0 = 0.0, D = 0.0;
    long long kmin = 0;
    if (std::sscanf(header.c_str(), "lattice v0=%lf D=%lf kmin=%lld", &v0, &D, &kmin) != 3)
        throw ParseError("bad distribution header: " + header);
    std::vector<double> mass;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        double m = std::strtod(line.c_str(), &end);
        if (end == line.c_str()) throw ParseError("bad mass line: " + line);
        mass.push_back(m);
    }
    if (mass.empty()) throw ParseError("distribution text has no mass lines");
    return LatticeDistribution({v0, D}, kmin, std::move(mass));
}

LatticeDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open distribution file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_text(os.str());
}

}  // namespace llt
