#pragma once

#include <string>

#include "neurodob/config.hpp"
#include "neurodob/dob.hpp"
#include "neurodob/driver.hpp"
#include "neurodob/lqr.hpp"
#include "neurodob/nn.hpp"
#include "neurodob/vehicle.hpp"

namespace ndob {

/// Bindings from the sectioned config file to domain objects. Every key has
/// a documented default, so an empty config yields the shipped workbench.
VehicleParams vehicle_from_config(const Config& cfg);
LqrWeights lqr_weights_from_config(const Config& cfg);
double dob_cutoff_from_config(const Config& cfg);
TrainConfig train_config_from_config(const Config& cfg);
DriverParams driver_from_config(const Config& cfg,
                                const std::string& profile_override = "");
PlantConfig plant_from_config(const Config& cfg,
                              const std::string& section = "sim");

/// The shipped default configuration (all sections, all keys).
std::string default_config_text();

/// Human-readable key reference for --help.
std::string config_key_reference();

}  // namespace ndob
