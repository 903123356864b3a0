#pragma once

#include <string>
#include <vector>

#include "ptspectra/io.hpp"

namespace ptspectra {

/// fig2a, fig2b, fig2c, fig3, fig4, fig5.
const std::vector<std::string>& preset_names();

/// The sweeps behind a figure, one job per plotted series. `axis` selects the
/// alternate sweep of fig4 ("b", separation fixed); empty keeps the default.
/// Throws ConfigError for an unknown name or axis.
std::vector<SweepJob> preset_jobs(const std::string& name, const std::string& axis = "");

}  // namespace ptspectra
