#include "roivault/henon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roivault/digest.hpp"

// keep 1 - a*x*x + y as separate rounded operations; a fused multiply-add
// would change the stream on FMA hardware
#pragma STDC FP_CONTRACT OFF

namespace roivault {

HenonParams::HenonParams(double a_, double b_) : a(a_), b(b_) {
    if (!(a >= 1.0 && a <= 1.45) || !(b >= 0.2 && b <= 0.35))
        throw Error("Henon parameters outside the chaotic regime: a=" + std::to_string(a) +
                    " b=" + std::to_string(b));
}

HenonState henon_step(const HenonState& s, const HenonParams& p) {
    const double t = p.a * (s.x * s.x);
    const double x1 = (1.0 - t) + s.y;
    const double y1 = p.b * s.x;
    if (std::fabs(x1) > kDivergenceBound)
        throw Diverged("orbit left the attractor basin at step " + std::to_string(s.n + 1));
    return {x1, y1, s.n + 1};
}

namespace {

bool orbit_stays_bounded(double x0, double y0, const HenonParams& p, std::uint64_t steps) {
    HenonState s{x0, y0, 0};
    try {
        for (std::uint64_t i = 0; i < steps; ++i) s = henon_step(s, p);
    } catch (const Diverged&) {
        return false;
    }
    return true;
}

} // namespace

KeySchedule KeySchedule::from_passphrase(std::string_view passphrase,
                                         const HenonParams& params,
                                         std::uint64_t burn_in) {
    if (passphrase.empty()) throw EmptyPassphrase("passphrase must be non-empty");

    for (std::uint32_t attempt = 0; attempt < 16; ++attempt) {
        std::string input(passphrase);
        if (attempt > 0) input += std::to_string(attempt);
        auto d = sha256(std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(input.data()), input.size()));

        std::uint64_t h1 = 0, h2 = 0;
        for (int i = 0; i < 8; ++i) {
            h1 = (h1 << 8) | d[i];
            h2 = (h2 << 8) | d[8 + i];
        }
        KeySchedule ks;
        ks.x0 = -0.25 + 0.5 * (static_cast<double>(h1) * 0x1p-64);
        ks.y0 = -0.25 + 0.5 * (static_cast<double>(h2) * 0x1p-64);
        ks.params = params;
        ks.burn_in = burn_in;
        ks.rehash_counter = attempt;
        if (orbit_stays_bounded(ks.x0, ks.y0, params, burn_in + (1u << 16)))
            return ks;
    }
    throw BasinExhausted("16 derivations diverged; digest is broken");
}

KeySchedule KeySchedule::explicit_state(double x0, double y0, const HenonParams& params,
                                        std::uint64_t burn_in) {
    KeySchedule ks;
    ks.x0 = x0;
    ks.y0 = y0;
    ks.params = params;
    ks.burn_in = burn_in;
    return ks;
}

bool KeySchedule::operator==(const KeySchedule& o) const {
    return x0 == o.x0 && y0 == o.y0 && params.a == o.params.a && params.b == o.params.b &&
           burn_in == o.burn_in && rehash_counter == o.rehash_counter;
}

Keystream::Keystream(const KeySchedule& ks) : state_{ks.x0, ks.y0, 0}, params_(ks.params) {
    for (std::uint64_t i = 0; i < ks.burn_in; ++i) state_ = henon_step(state_, params_);
}

std::uint8_t Keystream::next() {
    state_ = henon_step(state_, params_);
    ++emitted_;
    return static_cast<std::uint8_t>(
        static_cast<std::uint64_t>(std::floor(std::fabs(state_.x) * 1.0e10)) % 256);
}

void Keystream::skip(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) state_ = henon_step(state_, params_);
}

std::vector<std::uint8_t> Keystream::take(std::uint64_t n) {
    std::vector<std::uint8_t> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(next());
    return out;
}

std::vector<std::uint8_t> keystream(const KeySchedule& ks, std::uint64_t nbytes) {
    Keystream g(ks);
    return g.take(nbytes);
}

std::pair<double, double> orbit_bounds_check(const KeySchedule& ks, std::uint64_t steps) {
    if (steps < 1) throw EmptyInput("orbit_bounds_check needs steps >= 1");
    HenonState s{ks.x0, ks.y0, 0};
    double mx = 0.0, my = 0.0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        s = henon_step(s, ks.params);
        mx = std::max(mx, std::fabs(s.x));
        my = std::max(my, std::fabs(s.y));
    }
    return {mx, my};
}

} // namespace roivault
