#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "irses/gain.hpp"
#include "irses/geometry.hpp"
#include "irses/rng.hpp"

namespace irses {

struct ChannelParams {
    double alpha = 1.0;    // path gain at 1 m reference
    double lambda = 0.15;  // wavelength [m]
    double speed = 0.0;    // target speed [m/s]
    double sigma2 = 1.0;   // noise variance per receive antenna
    int m_antennas = 1;

    void validate() const {
        if (!(alpha > 0.0) || !(sigma2 > 0.0) || m_antennas < 1 || speed < 0.0)
            throw std::invalid_argument("ChannelParams: invalid parameter values");
    }
};

struct RadarWaveform {
    ComplexVector x;
};

// Unit-power pulse on the first transmit antenna. The waveform only scales
// the normalized receive power G, so a deterministic default keeps tests
// reproducible.
inline RadarWaveform default_waveform(int m_antennas) {
    RadarWaveform w;
    w.x = ComplexVector::Zero(m_antennas);
    w.x[0] = 1.0;
    return w;
}

enum class LinkSide { Transmit, Receive };

// rho = (sqrt(alpha)/d) * exp(-j*2*pi*d/lambda)
inline std::complex<double> path_gain(const Vec3& q, const Vec3& w,
                                      const ChannelParams& params) {
    const double d = distance(q, w);
    if (d <= 0.0) throw DegenerateGeometryError("path_gain: coincident points");
    return std::polar(std::sqrt(params.alpha) / d,
                      -2.0 * std::numbers::pi * d / params.lambda);
}

// f = v*cos(zenith)*cos(azimuth)/lambda for the link between q and w, with
// zenith measured from the downward array normal and azimuth from the x-axis
// (atan2 convention; the nadir direction takes azimuth 0).
inline double doppler_shift(const Vec3& q, const Vec3& w, const ChannelParams& params,
                            LinkSide /*side*/) {
    const double d = distance(q, w);
    if (d <= 0.0) throw DegenerateGeometryError("doppler_shift: coincident points");
    const double dx = w.x - q.x, dy = w.y - q.y;
    const double r_xy = std::sqrt(dx * dx + dy * dy);
    const double cos_zenith = (q.z - w.z) / d;
    const double cos_azimuth = r_xy > 0.0 ? dx / r_xy : 1.0;
    return params.speed * cos_zenith * cos_azimuth / params.lambda;
}

// One LoS link between the IRS at q and a radar terminal at w.
struct LinkChannel {
    std::complex<double> rho;
    double doppler = 0.0;
    ComplexVector array_response_irs;    // length N
    ComplexVector array_response_radar;  // length M
    double distance = 0.0;
};

namespace detail {

// Radar terminals are modeled as half-wavelength ULAs along the x-axis
// (normalized spacing 1); the choice cancels out of |R|^2.
inline ComplexVector radar_array_response(const Vec3& q, const Vec3& w, int m_antennas) {
    const double cosine = (q.x - w.x) / distance(q, w);
    return ula_steering(cosine, m_antennas);
}

}  // namespace detail

inline LinkChannel build_link(const Vec3& q, const Vec3& w, const ArrayGeometry& geom,
                              const ChannelParams& params, LinkSide side) {
    LinkChannel link;
    link.distance = distance(q, w);
    link.rho = path_gain(q, w, params);
    link.doppler = doppler_shift(q, w, params, side);
    link.array_response_irs = upa_response(direction_cosines(q, w), geom);
    link.array_response_radar = detail::radar_array_response(q, w, params.m_antennas);
    return link;
}

struct TransmitChannel {
    ComplexMatrix H;       // N x M, rank 1
    ComplexVector h_row;   // the 1 x M target-path row vector, stored as a vector
    LinkChannel link;
};

struct ReceiveChannel {
    ComplexMatrix H;   // M x N, rank 1
    ComplexVector h;   // M x 1 target-path vector
    LinkChannel link;
};

// H_T = rho_T * exp(j*2*pi*f_T*t) * a_R * a_bar_T^H, and the target-path row
// rho_T * exp(j*2*pi*f_T*t) * a_bar_T^H.
inline TransmitChannel build_transmit_channel(const Vec3& q, const Vec3& w_t, double t,
                                              const ArrayGeometry& geom,
                                              const ChannelParams& params) {
    params.validate();
    TransmitChannel ch;
    ch.link = build_link(q, w_t, geom, params, LinkSide::Transmit);
    const std::complex<double> scale =
        ch.link.rho * std::polar(1.0, 2.0 * std::numbers::pi * ch.link.doppler * t);
    ch.h_row = scale * ch.link.array_response_radar.conjugate();
    ch.H = ch.link.array_response_irs * ch.h_row.transpose();
    return ch;
}

// H_R = rho_R * exp(j*2*pi*f_R*t) * a_bar_R * a_T^H, and the target-path
// vector rho_R * exp(j*2*pi*f_R*t) * a_bar_R.
inline ReceiveChannel build_receive_channel(const Vec3& q, const Vec3& w_r, double t,
                                            const ArrayGeometry& geom,
                                            const ChannelParams& params) {
    params.validate();
    ReceiveChannel ch;
    ch.link = build_link(q, w_r, geom, params, LinkSide::Receive);
    const std::complex<double> scale =
        ch.link.rho * std::polar(1.0, 2.0 * std::numbers::pi * ch.link.doppler * t);
    ch.h = scale * ch.link.array_response_radar;
    ch.H = ch.h * ch.link.array_response_irs.adjoint();
    return ch;
}

struct EchoSnapshot {
    ComplexVector y;  // received echo, length M
    double snr = 0.0;
    double g_norm = 0.0;  // normalized receive power G at |R|^2 = 1
    std::complex<double> reflection_gain;
    std::uint64_t noise_seed = 0;
};

// Deviation pair (AoA minus AoD spatial frequencies) of a bistatic placement.
inline SpatialFrequencyPair channel_deviation(const Vec3& q, const Vec3& w_t,
                                              const Vec3& w_r) {
    const SpatialFrequencyPair in = direction_cosines(q, w_t);
    const SpatialFrequencyPair out = direction_cosines(q, w_r);
    return {in.phi - out.phi, in.omega - out.omega};
}

namespace detail {

inline double normalized_receive_power(const TransmitChannel& tx, const ReceiveChannel& rx,
                                       const RadarWaveform& waveform, int m_antennas) {
    // dot() conjugates its first argument, so this is a_bar_T^H x.
    const std::complex<double> pulse_proj = tx.link.array_response_radar.dot(waveform.x);
    return static_cast<double>(m_antennas) * std::norm(rx.link.rho) *
           std::norm(tx.link.rho) * std::norm(pulse_proj);
}

}  // namespace detail

// Noiseless receiver SNR (G / (M * sigma^2)) * |R|^2.
inline double receiver_snr(const Vec3& q, const Vec3& w_t, const Vec3& w_r,
                           const ReflectionVector& theta, const RadarWaveform& waveform,
                           double t, const ArrayGeometry& geom, const ChannelParams& params,
                           const TargetRcs& tau_s) {
    params.validate();
    const TransmitChannel tx = build_transmit_channel(q, w_t, t, geom, params);
    const ReceiveChannel rx = build_receive_channel(q, w_r, t, geom, params);
    const double g = detail::normalized_receive_power(tx, rx, waveform, params.m_antennas);
    const std::complex<double> r =
        reflection_gain(theta, channel_deviation(q, w_t, w_r), tau_s, geom);
    return g / (params.m_antennas * params.sigma2) * std::norm(r);
}

// Noise-free part of the echo: H_R diag(theta) H_T x + tau_S h_R h_T^H x.
inline ComplexVector noiseless_echo(const Vec3& q, const Vec3& w_t, const Vec3& w_r,
                                    const ReflectionVector& theta,
                                    const RadarWaveform& waveform, double t,
                                    const ArrayGeometry& geom, const ChannelParams& params,
                                    const TargetRcs& tau_s) {
    params.validate();
    if (theta.theta.size() != geom.elements())
        throw std::invalid_argument("noiseless_echo: theta length does not match geometry");
    if (waveform.x.size() != params.m_antennas)
        throw std::invalid_argument("noiseless_echo: waveform length does not match m_antennas");
    const TransmitChannel tx = build_transmit_channel(q, w_t, t, geom, params);
    const ReceiveChannel rx = build_receive_channel(q, w_r, t, geom, params);
    const std::complex<double> target_path = tx.h_row.cwiseProduct(waveform.x).sum();
    return rx.H * (theta.theta.asDiagonal() * (tx.H * waveform.x)) +
           tau_s.value * target_path * rx.h;
}

// Full echo of one pulse: the noiseless part plus n ~ CN(0, sigma^2 I) drawn
// reproducibly from noise_seed (complex entry m consumes the splitmix64
// draws 2m and 2m+1 via Box-Muller).
inline EchoSnapshot simulate_echo(const Vec3& q, const Vec3& w_t, const Vec3& w_r,
                                  const ReflectionVector& theta,
                                  const RadarWaveform& waveform, double t,
                                  const ArrayGeometry& geom, const ChannelParams& params,
                                  const TargetRcs& tau_s, std::uint64_t noise_seed) {
    ComplexVector y = noiseless_echo(q, w_t, w_r, theta, waveform, t, geom, params, tau_s);

    SplitMix64 rng(noise_seed);
    for (int m = 0; m < params.m_antennas; ++m) y[m] += rng.complex_normal(params.sigma2);

    const TransmitChannel tx = build_transmit_channel(q, w_t, t, geom, params);
    const ReceiveChannel rx = build_receive_channel(q, w_r, t, geom, params);
    EchoSnapshot snap;
    snap.g_norm = detail::normalized_receive_power(tx, rx, waveform, params.m_antennas);
    snap.reflection_gain =
        reflection_gain(theta, channel_deviation(q, w_t, w_r), tau_s, geom);
    snap.snr = snap.g_norm / (params.m_antennas * params.sigma2) *
               std::norm(snap.reflection_gain);
    snap.noise_seed = noise_seed;
    snap.y = std::move(y);
    return snap;
}

}  // namespace irses
