#pragma once

#include <stdexcept>
#include <vector>

#include "sphermite/field.hpp"
#include "sphermite/hermite_map.hpp"

namespace sphermite {

enum class BakeMode { CentralDiff, Analytic };

/// Field evaluation produced a non-finite value.
class BakeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Surface parameters copied into the map header.
struct BakeOptions {
    int gutter = 1;
    double scale = 1.0;
    bool signed_abs = false;
};

/// Bakes (r, r_u h, r_v h, r_uv h²) at every stored texel center, gutter
/// included, from direct field evaluation.
///
/// CentralDiff evaluates an (N + 2g + 2)² margin grid and differences it with
/// step h, so every stored texel gets a second-order central stencil.
/// Analytic takes r_u, r_v from the field's chart derivatives and central
/// differences r_u along v for the mixed term.
///
/// Throws std::invalid_argument for N < 2 ("invalid resolution") or Analytic on
/// a field without chart derivatives, and BakeError on non-finite values.
HermiteCubemap bake(const SphericalField& field, int n, BakeMode mode, const BakeOptions& opt = {});

/// One-channel map of direct evaluations at stored texel centers.
HermiteCubemap bake_value_only(const SphericalField& field, int n, const BakeOptions& opt = {});

enum class MipMode { Consistent, Naive };

/// Level 0 is a copy of `map`; each further level halves N down to 4.
///
/// Naive box-filters all four channels as they are. Consistent box-filters the
/// value channel and recomputes the derivative channels from it with the
/// level's own h (central differences, one-sided on the outer ring). Child
/// gutter texels whose parent footprint leaves the stored grid use linear
/// extrapolation of the parent texels in both modes.
///
/// Throws std::invalid_argument unless N is a power of two >= 4.
std::vector<HermiteCubemap> build_mip_chain(const HermiteCubemap& map, MipMode mode);

/// Mip chain re-baked from the field at each level (when the field is still
/// available).
std::vector<HermiteCubemap> rebake_mip_chain(const SphericalField& field, int n, BakeMode mode,
                                             const BakeOptions& opt = {});

}  // namespace sphermite
