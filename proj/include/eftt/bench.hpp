#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eftt/model.hpp"
#include "eftt/tensor.hpp"

namespace eftt::bench {

/// Benchmark function on its native tensor-product box.
struct TestFunction {
    std::string name;
    int d = 0;
    std::vector<std::pair<double, double>> box;  // per-mode (lo, hi)
    model::PointFn f;                            // oracle on the box
    std::optional<double> analytic_integral;     // over the box, when known
    std::optional<std::pair<Index, Index>> known_ranks;  // (max R_l, max r_l)

    /// Jacobian of the affine map from [-1,1]^d onto the box: prod (hi-lo)/2.
    double volume_factor() const;
    /// Oracle composed with the affine map, defined on [-1,1]^d.
    model::PointFn on_cube() const;
};

/// x in [-1,1] -> lo + (x+1)(hi-lo)/2 per mode.
model::PointFn affine_to_cube(const model::PointFn& f_on_box,
                              const std::vector<std::pair<double, double>>& box);

/// All named benchmark functions. Names are stable lowercase CLI identifiers.
const std::vector<TestFunction>& registry();

/// Lookup by name; throws std::invalid_argument listing the valid names.
const TestFunction& lookup(const std::string& name);

enum class GenzFamily { Oscillatory, CornerPeak, Continuous };

struct GenzSpec {
    GenzFamily family = GenzFamily::Oscillatory;
    int d = 0;
    std::vector<double> w;  // shifts, uniform on [0,1]
    std::vector<double> c;  // difficulty, uniform on [0,1] then scaled so sum c = b / d^h
    double b = 0.0;
    double h = 0.0;
};

/// Sample Genz parameters from the seed and return the spec plus oracle on
/// [-1,1]^d. Scaling constants: (284.6, 1.5) oscillatory, (185.0, 2.0) corner
/// peak, (2040.0, 2.0) continuous.
std::pair<GenzSpec, model::PointFn> genz(GenzFamily family, int d, std::uint64_t seed);

/// sin(x_1 + ... + x_d) on [0,1]^d with the analytic integral
/// Im(((e^i - 1)/i)^d).
TestFunction sin_sum(int d);

/// Robot-arm variant switch: the registry default takes the printed inner sum
/// literally (constant in the summation index, i.e. 4*theta_i); the cumulative
/// form uses the conventional sum_{j<=i} theta_j.
TestFunction robot_arm(bool cumulative);

}  // namespace eftt::bench
