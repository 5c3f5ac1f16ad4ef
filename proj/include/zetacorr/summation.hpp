#pragma once

#include <cmath>
#include <complex>

namespace zetacorr {

// Neumaier's variant of Kahan summation. Order-dependent, so callers that
// need bit-determinism must fix the order of add() calls.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double init) : sum_(init) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }

    // Folds another partial sum in, keeping both compensation terms.
    void merge(const KahanSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexKahanSum {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    ComplexKahanSum& operator+=(std::complex<double> z) {
        add(z);
        return *this;
    }
    void merge(const ComplexKahanSum& other) {
        re_.merge(other.re_);
        im_.merge(other.im_);
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

}  // namespace zetacorr
