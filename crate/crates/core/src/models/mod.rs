// SPDX-License-Identifier: Apache-2.0

//! Closed-form model zoo, each paired with an equivalent Lindblad generator.

pub mod donor_acceptor;
pub mod ham;
pub mod hp;
pub mod photocell;
pub mod toy;

pub use donor_acceptor::{
    dorfman_currents, dorfman_generator, dorfman_ratio, dorfman_steady_state, DonorAcceptorParams,
    DorfmanPopulations,
};
pub use ham::{
    bare_hamiltonian, birth_death_rates, dressed_spectrum, ham_populations, net_birth_rate,
    toy_ham_generator, toy_ham_report, BirthDeathRates, DressedLabel, DressedModel, HamMarginal,
    HamPopulations, SpectrumModel,
};
pub use hp::{hp_finite_j_oracle, HpComparison, HpOracleParams};
pub use photocell::{
    creatore_currents, creatore_generator, creatore_ratio, creatore_steady_state, PhotocellParams,
    PhotocellPopulations,
};
pub use toy::{
    toy_decay_generator, toy_decay_generator_with_sink, toy_decay_populations, toy_decay_report,
    toy_decay_rho11_equal_rates, ToyParams,
};
