//! Shared fixtures for the benchmark suite.

use afdm_core::channel::{apply_channel, discretize_target, ChannelSpec, TargetGeometry};
use afdm_core::waveform::{add_cpp, pilot};
use afdm_core::{GeometryMode, TimeSignal, WaveformParams, C2};
use num_complex::Complex64;

/// Reference parameter set used across benches.
pub fn reference_params(n_subcarriers: usize) -> WaveformParams {
    WaveformParams::new(
        n_subcarriers,
        39.063e3,
        1,
        C2::Ratio {
            num: 1,
            den: (n_subcarriers * n_subcarriers) as i64,
        },
        n_subcarriers / 8,
        24e9,
        GeometryMode::Monostatic,
    )
    .expect("valid parameters")
}

/// Prefixed three-target echo of the pilot, for matched-filter benches.
pub fn three_target_echo(params: &WaveformParams) -> TimeSignal {
    let targets = [
        TargetGeometry::monostatic(300.0, 24.4, Complex64::new(1.0, 0.0)),
        TargetGeometry::monostatic(360.0, 48.8, Complex64::new(1.0, 0.0)),
        TargetGeometry::monostatic(375.0, 122.0, Complex64::new(1.0, 0.0)),
    ];
    let taps = targets
        .iter()
        .map(|t| discretize_target(t, params))
        .collect::<Result<Vec<_>, _>>()
        .expect("targets fit the prefix");
    let spec = ChannelSpec::new(taps).expect("nonempty taps");
    let tx = add_cpp(&pilot(params), params).expect("prefix fits");
    apply_channel(&tx, &spec).expect("channel applies")
}
