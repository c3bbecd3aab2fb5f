#include "modspace/fourier.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <numbers>

namespace modspace {

namespace {

using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

} // namespace

DftTables::DftTables(int n_) : n(n_), fwd(static_cast<std::size_t>(n_) * n_), inv(static_cast<std::size_t>(n_) * n_) {
    // x_m xi_k = 2pi (m - N/2)(k - N/2) / N; tabulate the 2N roots of unity
    // and index by the exact residue so that fwd/inv are exactly conjugate.
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
            long r = static_cast<long>(m - n / 2) * static_cast<long>(k - n / 2) % n;
            double phase = two_pi * static_cast<double>(r) / n;
            Complex w = std::polar(1.0, phase);
            fwd[static_cast<std::size_t>(k) * n + m] = std::conj(w);
            inv[static_cast<std::size_t>(m) * n + k] = w;
        }
    }
}

const DftTables& dft_tables(int n) {
    static std::mutex mu;
    static std::map<int, DftTables> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, DftTables(n)).first;
    return it->second;
}

void apply_axis_matrix(std::span<const Complex> src, std::span<Complex> dst,
                       std::span<const int> shape, int axis, const std::vector<Complex>& mat, int n) {
    require(axis >= 0 && axis < static_cast<int>(shape.size()), ErrorCode::internal, "axis out of range");
    require(shape[axis] == n, ErrorCode::internal, "axis length does not match matrix size");

    std::size_t lead = 1, trail = 1;
    for (int a = 0; a < axis; ++a) lead *= static_cast<std::size_t>(shape[a]);
    for (std::size_t a = axis + 1; a < shape.size(); ++a) trail *= static_cast<std::size_t>(shape[a]);

    ECMap m(mat.data(), n, n);
    for (std::size_t b = 0; b < lead; ++b) {
        ECMap in(src.data() + b * static_cast<std::size_t>(n) * trail, n, static_cast<Eigen::Index>(trail));
        EMap out(dst.data() + b * static_cast<std::size_t>(n) * trail, n, static_cast<Eigen::Index>(trail));
        out.noalias() = m * in;
    }
}

void centered_dft_axis(std::vector<Complex>& data, std::span<const int> shape, int axis) {
    const auto& t = dft_tables(shape[axis]);
    std::vector<Complex> tmp(data.size());
    apply_axis_matrix(data, tmp, shape, axis, t.fwd, t.n);
    data.swap(tmp);
}

void centered_idft_axis(std::vector<Complex>& data, std::span<const int> shape, int axis) {
    const auto& t = dft_tables(shape[axis]);
    std::vector<Complex> tmp(data.size());
    apply_axis_matrix(data, tmp, shape, axis, t.inv, t.n);
    data.swap(tmp);
}

void centered_dft_axes(std::vector<Complex>& data, std::span<const int> shape, std::span<const int> axes) {
    for (int a : axes) centered_dft_axis(data, shape, a);
}

void centered_idft_axes(std::vector<Complex>& data, std::span<const int> shape, std::span<const int> axes) {
    for (int a : axes) centered_idft_axis(data, shape, a);
}

std::vector<Complex> refine2x_axis(std::span<const Complex> data, std::span<const int> shape, int axis) {
    const int n = shape[axis];
    const auto& t = dft_tables(n);
    const auto& t2 = dft_tables(2 * n);

    std::size_t lead = 1, trail = 1;
    for (int a = 0; a < axis; ++a) lead *= static_cast<std::size_t>(shape[a]);
    for (std::size_t a = axis + 1; a < shape.size(); ++a) trail *= static_cast<std::size_t>(shape[a]);

    std::vector<Complex> spec(data.size());
    apply_axis_matrix(data, spec, shape, axis, t.fwd, n);

    // Embed the centered spectrum [-N/2, N/2) into [-N, N): bin k-N/2 goes
    // to slot k+N/2 of the refined spectrum; the lone -Nyquist bin is split
    // between -N/2 and +N/2 to keep real data real.
    std::vector<Complex> spec2(lead * static_cast<std::size_t>(2 * n) * trail, Complex(0, 0));
    for (std::size_t b = 0; b < lead; ++b) {
        const Complex* in = spec.data() + b * static_cast<std::size_t>(n) * trail;
        Complex* out = spec2.data() + b * static_cast<std::size_t>(2 * n) * trail;
        for (int k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < trail; ++j) {
                Complex v = in[static_cast<std::size_t>(k) * trail + j];
                if (k == 0) {
                    out[static_cast<std::size_t>(n / 2) * trail + j] += 0.5 * v;
                    out[static_cast<std::size_t>(3 * n / 2) * trail + j] += 0.5 * v;
                } else {
                    out[static_cast<std::size_t>(k + n / 2) * trail + j] = v;
                }
            }
        }
    }

    std::vector<int> shape2(shape.begin(), shape.end());
    shape2[axis] = 2 * n;
    std::vector<Complex> refined(spec2.size());
    apply_axis_matrix(spec2, refined, shape2, axis, t2.inv, 2 * n);
    const double scale = 1.0 / n; // idft of the n-point analysis carries 1/n
    for (Complex& v : refined) v *= scale;
    return refined;
}

} // namespace modspace
