#pragma once

#include "dms/dist.hpp"
#include "dms/rng.hpp"

namespace dms {

enum class TransportMode { Sea, Air, Road };

/// NTM-style per-unit emission structure: kg CO2 = weight * (fixed + distance * variable).
struct EmissionCoeffs {
    double fixed_kg_per_kg = 0.0;     // kg CO2 per kg shipped
    double per_kg_km = 0.0;           // kg CO2 per kg per km
};

EmissionCoeffs emission_coeffs(TransportMode mode);

struct TripSpec {
    TransportMode mode = TransportMode::Sea;
    double distance_km = 0.0;
    double unit_weight_kg = 0.0;
};

/// kg CO2 for shipping one unit on the given trip. Linear in the unit weight.
double unit_emission(const TripSpec& trip);

/// Assortment families of the randomized test-bed. Apparel: the fast mode is
/// always dirtier. Industrial: the slow mode is always dirtier. Mixed: the
/// two unit emissions are drawn independently, either mode may be dirtier.
enum class AssortmentType { Apparel = 1, Industrial = 2, Mixed = 3 };

AssortmentType assortment_from_int(int v);

struct EmissionPair {
    double slow = 0.0;  // kg CO2 per unit on the slow mode
    double fast = 0.0;  // kg CO2 per unit on the fast mode
};

/// Draws the (slow, fast) per-unit emissions of one product from the fitted
/// distributions of the given assortment family.
EmissionPair sample_emission_pair(AssortmentType type, RngStream& rng);

}  // namespace dms
