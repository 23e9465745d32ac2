#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ecggan/beat.hpp"
#include "ecggan/features.hpp"
#include "ecggan/types.hpp"

namespace ecggan {

/// One Gaussian bump. `center_ms` is measured from the QRS reference point,
/// which rendering places at sample 200; `width_ms` is the standard deviation.
struct Wave {
  double center_ms = 0.0;
  double width_ms = 1.0;
  double amplitude_mv = 0.0;
};

struct LeadWaves {
  Wave p, q, r, s, t;
  double st_offset_mv = 0.0;  // plateau from the J point into the T wave
};

/// Sum-of-Gaussians beat model over the 8 training leads. The QRS complex
/// spans [-qrs_dur_ms / 2, +qrs_dur_ms / 2] around the reference point.
struct BeatTemplate {
  std::array<LeadWaves, 8> leads{};
  double qrs_dur_ms = 90.0;
  double qt_ms = 380.0;
  double pr_ms = 160.0;
  double noise_std_mv = 0.0;
  std::uint64_t seed = 0;
};

/// Throws InvalidTemplate when widths are not positive, pr/qt are out of
/// order or the P < Q < R < S < T ordering is violated on any lead.
void validate(const BeatTemplate& t);

BeatMatrix render_beat(const BeatTemplate& t);

struct LabeledBeat {
  BeatMatrix beat;
  BeatFeatures truth;
  BeatTemplate source;
};

struct CorpusOptions {
  double noise_std_mv = 0.0;
};

/// Seeded corpus of jittered templates for one target category (Other is
/// rejected). Ground truth carries the template's intervals, ST offsets,
/// voltages, notches and the axes of the bump areas.
std::vector<LabeledBeat> make_corpus(Category category, std::size_t n, std::uint64_t seed,
                                     const CorpusOptions& options = {});

/// Template drawn for beat `index` of a corpus.
BeatTemplate sample_template(Category category, std::uint64_t seed, std::size_t index);

/// Ground-truth features implied by a template (noise ignored).
BeatFeatures template_features(const BeatTemplate& t);

}  // namespace ecggan
