#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kahlab/flow.hpp"
#include "kahlab/surface.hpp"

namespace kahlab {

/// Text surface format:
///   surf <n_theta> <n_phi> <T_theta> <T_phi>
///   linear <8 numbers, row-major 4x2>
///   n_theta * n_phi lines of 4 numbers (periodic part, theta-major)
/// Numbers are written with 17 significant digits so files round-trip exactly.
void write_surface(std::ostream& os, const ImmersedSurface& s);
ImmersedSurface read_surface(std::istream& is);

void save_surface(const std::string& path, const ImmersedSurface& s);
ImmersedSurface load_surface(const std::string& path);

/// CSV with header iteration,L_beta,res_l2,res_linf,min_cos_alpha,tau.
void write_trace(std::ostream& os, const std::vector<TraceRow>& trace);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace kahlab
