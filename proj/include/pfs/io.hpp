#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pfs/movielens.hpp"
#include "pfs/profile.hpp"

namespace pfs {

// PMF vectors travel as a JSON array or a single-column CSV (one value per
// line); the loader sniffs the format from the content.
Pmf load_pmf(const std::filesystem::path& path);
Pmf parse_pmf(const std::string& text, const std::string& origin);

// Inclusive-endpoint axis description "lo:hi:steps".
struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 1;

  std::vector<double> points() const;
};

struct GridSpec {
  AxisSpec rho;
  AxisSpec sigma;
};

// Parses "rho:LO:HI:N,sigma:LO:HI:N".
GridSpec parse_grid_spec(const std::string& text);

// Risk (or relative-reduction) values over a rate grid. values[a][b] belongs
// to rho_axis[a] and sigma_axis[b].
struct SurfaceGrid {
  std::vector<double> rho_axis;
  std::vector<double> sigma_axis;
  std::vector<std::vector<double>> values;
  std::string meta;  // free-form description carried in the corner comment
};

// Header row of sigma values under the corner cell `rho\sigma`, one row per
// rho. Doubles are printed with round-trip precision.
void write_surface_csv(std::ostream& out, const SurfaceGrid& surface);
SurfaceGrid read_surface_csv(std::istream& in);

// Profile store as JSON lines: a versioned header object, one object per
// user, and a trailing population object.
void write_profile_store(std::ostream& out, const UserProfileSet& profiles);
UserProfileSet read_profile_store(std::istream& in);
UserProfileSet read_profile_store(const std::filesystem::path& path);

std::string format_double(double value);  // shortest round-trip decimal

}  // namespace pfs
