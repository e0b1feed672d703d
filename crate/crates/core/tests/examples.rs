macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(validate_dataset, "validate_dataset.rs");
example!(derived_invariants, "derived_invariants.rs");
example!(correlation_table, "correlation_table.rs");
example!(regression_and_clusters, "regression_and_clusters.rs");
example!(train_network, "train_network.rs");
example!(error_tables, "error_tables.rs");
example!(distill_formula, "distill_formula.rs");
example!(phase_sweep, "phase_sweep.rs");
example!(scatter_export, "scatter_export.rs");
