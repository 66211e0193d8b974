#ifndef AVC_DECODER_HPP
#define AVC_DECODER_HPP

#include <cstdint>
#include <span>

#include "avc/codebook.hpp"

namespace avc {

// declared = 0 signals a decoder-declared error (nearest codewords tie
// across at least two distinct rows)
struct DecodeResult {
    std::uint64_t declared = 0;
    std::uint64_t argmin_row = 0; // row of the nearest codeword (lowest on tie)
    bool tie = false;             // more than one codeword within tolerance
};

// absolute tolerance on squared distances when detecting ties
inline double tie_tolerance(const ChannelParams& p) { return 1e-12 * p.transmit_energy(); }

// nearest-codeword rule at row granularity: the row of the global minimum
// of |y - x(j,t)|^2, or 0 when rows tie.  OpenMP across codewords.
DecodeResult decode(const Codebook& cb, std::span<const double> y);
// single-threaded reference, kept for testing; agrees bit for bit
DecodeResult decode_serial(const Codebook& cb, std::span<const double> y);

// Error predicate for transmitted word (i, t) under state s and noise v:
// some wrong-row word (j, t') satisfies
//   <x(j,t'), x(i,t)+s+v>  >=  n*P + <x(i,t), s+v>.
bool error_event(const Codebook& cb, std::uint64_t i, std::uint64_t t,
                 std::span<const double> s, std::span<const double> v);

// same event written on squared distances:
//   |x(i,t)+s+v - x(j,t')|^2 <= |s+v|^2 for some j != i, t'
bool error_event_distance_form(const Codebook& cb, std::uint64_t i, std::uint64_t t,
                               std::span<const double> s, std::span<const double> v);

} // namespace avc

#endif
