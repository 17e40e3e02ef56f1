// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use qsolar::io::config::{Command, RunConfig, DEFAULT_CONFIG};

const CORPUS: &[(Command, &str)] = &[
    (Command::ToyHam, "[toy]\nomega_abs = 1.0\nomega_rc = 0.5\ngamma = 0.001\nt_abs = 2.0\nt_loss = 0.2\n"),
    (Command::ToyDecay, "[toy]\ngamma_h = 0.01\ngamma_c = 0\n"),
    (Command::DonorAcceptor, "[donor_acceptor]\nomega_alpha = 0.9\nomega_beta = 0.05\n"),
    (Command::Photocell, "[photocell]\nt_c = 0.1\ngamma_x = 2\n"),
    (Command::FmoTrace, "[fmo]\nt_end_ps = 2.5\nn_points = 11\ngamma_ant_fmo = 1.0\ninitial_state = \"ground\"\n"),
    (Command::Sweep, "[sweep]\nmodel = \"creatore\"\nhi = 0.97\ngamma_x = 0.2\n"),
    (Command::ComparePower, "# comment\n[compare]\nomega_rc = 1.2\nn_points = 7\n"),
];

#[test]
fn corpus_round_trips() {
    for &(command, text) in CORPUS {
        let cfg = RunConfig::parse(command, Some(text), &[]).unwrap_or_else(|e| panic!("{command}: {e}"));
        let emitted = cfg.to_config_text();
        let again = RunConfig::parse_strict(command, &emitted, &[]).unwrap();
        assert_eq!(cfg, again, "{command}");
        assert_eq!(again.to_config_text(), emitted);
    }
}

#[test]
fn defaults_are_complete_without_layers() {
    for command in Command::ALL {
        RunConfig::parse_strict(command, DEFAULT_CONFIG, &[]).unwrap();
    }
}

#[test]
fn integers_accepted_for_reals_but_not_reverse() {
    let cfg = RunConfig::parse(Command::ToyDecay, Some("[toy]\nt_abs = 3\n"), &[]).unwrap();
    assert_eq!(cfg.toy_params().unwrap().t_abs, 3.0);
    let e = RunConfig::parse(Command::Sweep, Some("[sweep]\nn_points = 9.5\n"), &[]).unwrap_err();
    assert!(e.to_string().contains("sweep.n_points must be an integer"), "{e}");
}

#[test]
fn domain_errors_name_key_and_constraint() {
    let cases = [
        (Command::ToyDecay, "t_abs", "-1", "t_abs must be > 0"),
        (Command::Sweep, "axis", "time", "axis must be omega_ratio or temp_ratio"),
        (Command::Sweep, "model", "fmo", "sweep.model must be one of"),
        (Command::FmoTrace, "initial_state", "thermal", "fmo.initial_state must be"),
        (Command::ToyHam, "gamma", "0.1", "omega_rc must be >= 20*gamma"),
    ];
    for (command, key, value, msg) in cases {
        let e = RunConfig::parse(command, None, &[(key.into(), value.into())]).unwrap_err();
        assert!(e.to_string().contains(msg), "{key}: {e}");
        assert_eq!(e.exit_code(), 2);
    }
}

#[test]
fn later_layers_win() {
    let file = "[toy]\nt_loss = 0.2\n";
    let cfg = RunConfig::parse(Command::ToyDecay, Some(file), &[("t_loss".into(), "0.4".into())]).unwrap();
    assert_eq!(cfg.toy_params().unwrap().t_loss, 0.4);
    let cfg = RunConfig::parse(Command::ToyDecay, Some(file), &[]).unwrap();
    assert_eq!(cfg.toy_params().unwrap().t_loss, 0.2);
    // a flag for another section is stored but does not affect this command
    let cfg = RunConfig::parse(Command::ToyDecay, None, &[("fmo.t_sun".into(), "6000".into())]).unwrap();
    assert!(cfg.to_config_text().contains("t_sun = 6000.0"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_toy_configs_round_trip(
        omega_abs in 0.1f64..10.0,
        x in 0.01f64..1.99,
        gamma in 1e-6f64..1e-3,
        t_abs in 0.1f64..10.0,
        t_loss in 0.01f64..10.0,
    ) {
        let text = format!(
            "[toy]\nomega_abs = {omega_abs:?}\nomega_rc = {:?}\ngamma = {gamma:?}\nt_abs = {t_abs:?}\nt_loss = {t_loss:?}\n",
            x * omega_abs
        );
        let cfg = RunConfig::parse(Command::ToyDecay, Some(&text), &[]).unwrap();
        let again = RunConfig::parse_strict(Command::ToyDecay, &cfg.to_config_text(), &[]).unwrap();
        prop_assert_eq!(cfg.toy_params().unwrap(), again.toy_params().unwrap());
        prop_assert_eq!(cfg, again);
    }
}
