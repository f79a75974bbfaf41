macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(fock_states, "fock_states.rs");
example!(beamsplitter_sectors, "beamsplitter_sectors.rs");
example!(schmidt_equivalence, "schmidt_equivalence.rs");
example!(multimode_network, "multimode_network.rs");
example!(mode_mixing_maps, "mode_mixing_maps.rs");
example!(particle_basis_mixing, "particle_basis_mixing.rs");
example!(extraction_protocol, "extraction_protocol.rs");
example!(squeezing_bounds, "squeezing_bounds.rs");

#[test]
fn examples_run() {
    fock_states::run_example().unwrap();
    beamsplitter_sectors::run_example().unwrap();
    schmidt_equivalence::run_example().unwrap();
    multimode_network::run_example().unwrap();
    mode_mixing_maps::run_example().unwrap();
    particle_basis_mixing::run_example().unwrap();
    extraction_protocol::run_example().unwrap();
    squeezing_bounds::run_example().unwrap();
}
