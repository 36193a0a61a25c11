#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "metricgeo/errors.hpp"

namespace metricgeo {

/// Real function of a non-negative real, either symbolic (a named closed
/// form) or sampled (monotone piecewise-linear interpolation of data).
class FunctionSpec {
public:
    FunctionSpec() = default;

    static FunctionSpec symbolic(std::string name, std::function<double(double)> f) {
        FunctionSpec s;
        s.name_ = std::move(name);
        s.fn_ = std::move(f);
        return s;
    }

    /// Sampled function; interpolates linearly between samples, extends by the
    /// boundary values outside the sampled range.
    static FunctionSpec sampled(std::string name,
                                std::vector<std::pair<double, double>> samples) {
        if (samples.empty())
            throw Error(errc::invalid_function, "sampled function needs samples");
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (!(samples[i].first > samples[i - 1].first))
                throw Error(errc::invalid_function, "sample abscissae must increase");
        FunctionSpec s;
        s.name_ = std::move(name);
        s.samples_ = std::move(samples);
        return s;
    }

    /// Parse the CLI spelling of a function. Accepted forms:
    ///   id | half | const:C | linear:a:b (a*r+b) | pow:k[:c] (c*r^k) |
    ///   log2 | sqrt | ceilsqrt | twosqrt (2*sqrt(r)-1) | rminuslog (r - log2 r)
    static FunctionSpec parse(const std::string& text) {
        auto starts = [&](const char* p) {
            return text.rfind(p, 0) == 0;
        };
        auto tail_numbers = [&](std::size_t prefix_len) {
            std::vector<double> out;
            std::size_t pos = prefix_len;
            while (pos < text.size()) {
                std::size_t next = text.find(':', pos);
                std::string tok = text.substr(pos, next == std::string::npos
                                                       ? std::string::npos
                                                       : next - pos);
                try {
                    out.push_back(std::stod(tok));
                } catch (...) {
                    throw Error(errc::invalid_function, "bad numeric field in '" + text + "'");
                }
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            return out;
        };
        if (text == "id") return symbolic("id", [](double r) { return r; });
        if (text == "half") return symbolic("half", [](double r) { return r / 2.0; });
        if (text == "log2")
            return symbolic("log2", [](double r) { return r > 1.0 ? std::log2(r) : 0.0; });
        if (text == "sqrt") return symbolic("sqrt", [](double r) { return std::sqrt(r); });
        if (text == "ceilsqrt")
            return symbolic("ceilsqrt", [](double r) { return std::ceil(std::sqrt(r)); });
        if (text == "twosqrt")
            return symbolic("twosqrt", [](double r) { return 2.0 * std::sqrt(r) - 1.0; });
        if (text == "rminuslog")
            return symbolic("rminuslog", [](double r) {
                return r > 1.0 ? std::min(r, r - std::log2(r)) : r;
            });
        if (starts("const:")) {
            auto v = tail_numbers(6);
            if (v.size() != 1) throw Error(errc::invalid_function, "const:C");
            double c = v[0];
            return symbolic(text, [c](double) { return c; });
        }
        if (starts("linear:")) {
            auto v = tail_numbers(7);
            if (v.size() != 2) throw Error(errc::invalid_function, "linear:a:b");
            double a = v[0], b = v[1];
            return symbolic(text, [a, b](double r) { return a * r + b; });
        }
        if (starts("pow:")) {
            auto v = tail_numbers(4);
            if (v.empty() || v.size() > 2) throw Error(errc::invalid_function, "pow:k[:c]");
            double k = v[0];
            double c = v.size() == 2 ? v[1] : 1.0;
            return symbolic(text, [k, c](double r) { return c * std::pow(r, k); });
        }
        throw Error(errc::invalid_function, "unknown function '" + text + "'");
    }

    const std::string& name() const { return name_; }

    double operator()(double r) const {
        if (fn_) return fn_(r);
        if (samples_.empty())
            throw Error(errc::invalid_function, "evaluating an empty function spec");
        if (r <= samples_.front().first) return samples_.front().second;
        if (r >= samples_.back().first) return samples_.back().second;
        std::size_t lo = 0, hi = samples_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (samples_[mid].first <= r)
                lo = mid;
            else
                hi = mid;
        }
        double t = (r - samples_[lo].first) /
                   (samples_[hi].first - samples_[lo].first);
        return samples_[lo].second + t * (samples_[hi].second - samples_[lo].second);
    }

    /// Solve f(x) = target for a non-decreasing f by expanding bisection on
    /// [lo, inf). Tolerance on x.
    double invert(double target, double lo, double tol = 1e-9) const {
        double hi = std::max(lo + 1.0, lo * 2.0);
        int guard = 0;
        while ((*this)(hi) < target) {
            hi = hi * 2.0 + 1.0;
            if (++guard > 200)
                throw Error(errc::invalid_function, "inversion target unreachable");
        }
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if ((*this)(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    std::string name_;
    std::function<double(double)> fn_;
    std::vector<std::pair<double, double>> samples_;
};

} // namespace metricgeo
