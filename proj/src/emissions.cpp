#include "dms/emissions.hpp"

#include <stdexcept>

namespace dms {

EmissionCoeffs emission_coeffs(TransportMode mode) {
    switch (mode) {
        case TransportMode::Sea: return {0.0, 1.996e-5};
        case TransportMode::Air: return {1.525e-1, 4.938e-4};
        case TransportMode::Road: return {3.214e-4, 4.836e-5};
    }
    throw std::invalid_argument("mode: unknown transport mode");
}

double unit_emission(const TripSpec& trip) {
    if (!(trip.distance_km > 0.0)) throw std::invalid_argument("distance_km: must be > 0");
    if (!(trip.unit_weight_kg > 0.0)) throw std::invalid_argument("unit_weight_kg: must be > 0");
    EmissionCoeffs c = emission_coeffs(trip.mode);
    return trip.unit_weight_kg * (c.fixed_kg_per_kg + trip.distance_km * c.per_kg_km);
}

AssortmentType assortment_from_int(int v) {
    switch (v) {
        case 1: return AssortmentType::Apparel;
        case 2: return AssortmentType::Industrial;
        case 3: return AssortmentType::Mixed;
    }
    throw std::invalid_argument("type: assortment type must be 1, 2 or 3");
}

EmissionPair sample_emission_pair(AssortmentType type, RngStream& rng) {
    switch (type) {
        case AssortmentType::Apparel: {
            double slow = sample(Gamma{0.35, 0.21}, rng);
            double fast = slow + sample(LogNormal{1.52, 0.21}, rng);
            return {slow, fast};
        }
        case AssortmentType::Industrial: {
            double fast = sample(Gamma{0.19, 1.27}, rng);
            double slow = fast + sample(Gamma{2.19, 1.27}, rng);
            return {slow, fast};
        }
        case AssortmentType::Mixed: {
            double fast = sample(Weibull{0.87, 0.77}, rng);
            double slow = sample(Gamma{3.31, 1.34}, rng);
            return {slow, fast};
        }
    }
    throw std::invalid_argument("type: unknown assortment type");
}

}  // namespace dms
