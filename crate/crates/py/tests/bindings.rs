use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<F: FnOnce(&Bound<'_, PyModule>) -> PyResult<()>>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "entropic").unwrap();
        entropic::entropic(&m).unwrap();
        f(&m).unwrap();
    });
}

#[test]
fn entropy_functions() {
    with_module(|m| {
        let h: f64 = m
            .getattr("shannon_entropy")?
            .call1((vec![0.5, 0.5],))?
            .extract()?;
        assert_eq!(h, 1.0);
        let r: f64 = m
            .getattr("renyi_entropy")?
            .call1((vec![0.25; 4], 2.0))?
            .extract()?;
        assert!((r - 2.0).abs() < 1e-12);
        let err = m
            .getattr("renyi_entropy")?
            .call1((vec![0.5, 0.5], 1.0))
            .unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(m.py()));
        Ok(())
    });
}

#[test]
fn learner_converges() {
    with_module(|m| {
        let learner = m.getattr("Learner")?.call1((3, 3))?;
        let losses: Vec<f64> = learner.call_method1("train", (2000,))?.extract()?;
        assert!(*losses.last().unwrap() < 1e-6);
        let h: f64 = learner.call_method0("entropy")?.extract()?;
        assert!(h < 0.01);
        Ok(())
    });
}

#[test]
fn cluster_and_explore() {
    with_module(|m| {
        let data = m.getattr("Dataset")?.call_method1("default300", (0, 1))?;
        assert_eq!(data.len()?, 300);
        let kwargs = pyo3::types::PyDict::new(m.py());
        kwargs.set_item("iterations", 200)?;
        let r = m.getattr("cluster")?.call((&data, 3), Some(&kwargs))?;
        let obj: f64 = r.getattr("objective")?.extract()?;
        let init: f64 = r.getattr("initial_objective")?.extract()?;
        assert!(obj <= init);
        let labels: Vec<usize> = data.getattr("labels")?.extract()?;
        let assignment: Vec<usize> = r.getattr("assignment")?.extract()?;
        let e: f64 = m
            .getattr("error_rate")?
            .call1((assignment, labels))?
            .extract()?;
        assert!((0.0..=1.0).contains(&e));

        let kwargs = pyo3::types::PyDict::new(m.py());
        kwargs.set_item("steps", 5000)?;
        let out = m.getattr("explore")?.call(("1",), Some(&kwargs))?;
        let counts: Vec<u64> = out.getattr("counts")?.extract()?;
        assert_eq!(counts.iter().sum::<u64>(), 5000);
        Ok(())
    });
}
