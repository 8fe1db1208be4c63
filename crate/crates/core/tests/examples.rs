macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(
    coefficient_tables,
    "coefficient_tables.rs",
    coefficient_tables_runs
);
example!(evaluate, "evaluate.rs", evaluate_runs);
example!(cancellation, "cancellation.rs", cancellation_runs);
example!(dingle_sign, "dingle_sign.rs", dingle_sign_runs);
example!(diagonal, "diagonal.rs", diagonal_runs);
example!(accuracy_map, "accuracy_map.rs", accuracy_map_runs);
example!(oracle_check, "oracle_check.rs", oracle_check_runs);
