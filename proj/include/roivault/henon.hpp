#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "roivault/errors.hpp"

namespace roivault {

/// Bifurcation parameters. Construction outside a in [1.0, 1.45],
/// b in [0.2, 0.35] is rejected to stay near the chaotic regime.
struct HenonParams {
    double a = 1.4;
    double b = 0.3;

    HenonParams() = default;
    HenonParams(double a_, double b_);
};

struct HenonState {
    double x = 0.0;
    double y = 0.0;
    std::uint64_t n = 0;
};

constexpr double kDivergenceBound = 10.0;

/// One orbit step: x' = 1 - a*x^2 + y, y' = b*x, evaluated in a fixed
/// operation order (multiply, subtract from 1, add y) with FMA disabled so the
/// stream is bit-identical across platforms. Throws Diverged when |x'| exceeds
/// the guard.
HenonState henon_step(const HenonState& s, const HenonParams& p);

/// Sole secret input of the cipher: initial conditions plus burn-in.
struct KeySchedule {
    double x0 = 0.0;
    double y0 = 0.0;
    HenonParams params;
    std::uint64_t burn_in = 1000;
    std::uint32_t rehash_counter = 0;

    /// Hash the passphrase (SHA-256), map the first two 64-bit words onto
    /// [-0.25, 0.25]^2, and probe the orbit for divergence; a diverging seed
    /// deterministically re-derives with an appended counter (16 attempts).
    static KeySchedule from_passphrase(std::string_view passphrase,
                                       const HenonParams& params = {},
                                       std::uint64_t burn_in = 1000);

    /// Bypass the hash: literal initial conditions (e.g. the x=0.1, y=0.1
    /// reference key). No interval restriction; a bad seed surfaces as
    /// Diverged when the stream runs.
    static KeySchedule explicit_state(double x0, double y0,
                                      const HenonParams& params = {},
                                      std::uint64_t burn_in = 1000);

    bool operator==(const KeySchedule&) const;
};

/// Incremental keystream generator. The constructor runs the burn-in; each
/// next() advances the orbit one step and extracts
/// floor(|x| * 1e10) mod 256. skip() discards bytes without counting them in
/// bytes_emitted (used for the verification-tag prefix).
class Keystream {
public:
    explicit Keystream(const KeySchedule& ks);

    std::uint8_t next();
    void skip(std::uint64_t n);
    std::vector<std::uint8_t> take(std::uint64_t n);
    std::uint64_t bytes_emitted() const { return emitted_; }

private:
    HenonState state_;
    HenonParams params_;
    std::uint64_t emitted_ = 0;
};

/// First nbytes of the stream; a pure function of (ks, nbytes) with the prefix
/// property keystream(ks, n) == keystream(ks, m)[0..n) for n <= m.
std::vector<std::uint8_t> keystream(const KeySchedule& ks, std::uint64_t nbytes);

/// Run the orbit `steps` steps from the initial conditions (no burn-in) and
/// return the running maxima (max|x|, max|y|) over the produced states.
std::pair<double, double> orbit_bounds_check(const KeySchedule& ks, std::uint64_t steps);

} // namespace roivault
