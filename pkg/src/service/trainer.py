"""
Trainers: joint VQ-CNNI optimization, decoder-only training on a frozen circuit,
and the BMSE-trained variational interferometer baseline
"""
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.errors import TrainingDivergedError
from src.models.evaluation import EvalGrid
from src.models.network import DecoderParams
from src.models.quantum import CircuitParams
from src.models.training import EvalRecord, GaussianPrior, TrainConfig, TrainResult, TrainTrace
from src.service.decoder import backward, forward, phase_estimate, phase_estimate_grad
from src.service.estimators import AffineEstimator, NetworkEstimator, PhaseEstimator
from src.service.interferometer import Interferometer
from src.service.optimizer import AdamState, adam_step
from src.util.metrics import swpe_median

logger = logging.getLogger(__name__)

Objective = Callable[[List[np.ndarray]], Tuple[float, List[np.ndarray]]]
EvalHook = Callable[[int, PhaseEstimator], Optional[str]]


def circular_loss(true_phases, est_phases) -> float:
    """1 - mean cos(phi - phi_est), in [0, 2]"""
    true_phases = np.asarray(true_phases, dtype=float)
    est_phases = np.asarray(est_phases, dtype=float)
    if true_phases.size == 0:
        raise ValueError("circular loss of an empty sample")
    if true_phases.shape != est_phases.shape:
        raise ValueError("true and estimated phases differ in length")
    return float(1.0 - np.mean(np.cos(true_phases - est_phases)))


def phase_grid(n: int) -> np.ndarray:
    """phi_i = -pi + 2 pi i / n, i = 0..n-1"""
    if n < 2:
        raise ValueError("phase grid needs at least 2 points")
    return -np.pi + 2 * np.pi * np.arange(n) / n


def fit_affine_estimator(table: np.ndarray, phases: np.ndarray, weights: np.ndarray,
                         labels: np.ndarray) -> Tuple[float, float]:
    """Weighted least squares for phi_est(m) = a*m + b at fixed circuit parameters"""
    mass = weights[:, None] * table
    design = np.array([
        [np.sum(mass * labels ** 2), np.sum(mass * labels)],
        [np.sum(mass * labels), np.sum(mass)],
    ])
    target = np.array([np.sum(mass * labels * phases[:, None]), np.sum(mass * phases[:, None])])
    (a, b), *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(a), float(b)


def bmse(table: np.ndarray, phases: np.ndarray, weights: np.ndarray, labels: np.ndarray,
         a: float, b: float) -> float:
    """sum_i w_i sum_m p(m|phi_i) (a m + b - phi_i)^2"""
    error = a * labels[None, :] + b - phases[:, None]
    return float(np.sum(weights[:, None] * table * error ** 2))


def _circuit(arrays: Sequence[np.ndarray]) -> CircuitParams:
    return CircuitParams(encoding=arrays[0], decoding=arrays[1])


def _split_quantum_grad(grad: np.ndarray, circuit: CircuitParams) -> List[np.ndarray]:
    n_enc = circuit.encoding.size
    return [grad[:n_enc].reshape(circuit.encoding.shape), grad[n_enc:].reshape(circuit.decoding.shape)]


def _decoder_objective(decoder: DecoderParams, table: np.ndarray, phases: np.ndarray):
    """Circular loss of a decoder on a probability table, with gradients on weights and inputs"""
    out = forward(decoder, table)
    estimates = phase_estimate(out.s, out.c)
    loss = circular_loss(phases, estimates)
    d_estimate = -np.sin(phases - estimates) / phases.size
    ds, dc = phase_estimate_grad(out.s, out.c)
    upstream = np.stack([d_estimate * ds, d_estimate * dc], axis=1)
    return loss, backward(decoder, out, upstream)


def joint_loss_and_grad(interferometer: Interferometer, circuit: CircuitParams, decoder: DecoderParams,
                        phases: np.ndarray) -> Tuple[float, List[np.ndarray], List[np.ndarray]]:
    """Circular loss over `phases` and its exact gradient on (theta, vartheta) and (w, b)"""
    table, jacobian = interferometer.table_and_jacobian(phases, circuit)
    loss, grads = _decoder_objective(decoder, table, phases)
    quantum = np.einsum("nd,nkd->k", grads.inputs, jacobian[:, :-1, :])
    return loss, _split_quantum_grad(quantum, circuit), grads.arrays()


def _optimize(objective: Objective, arrays: List[np.ndarray], config: TrainConfig,
              evaluate: Optional[Callable[[int, List[np.ndarray], float], EvalRecord]] = None,
              ) -> Tuple[List[np.ndarray], TrainTrace]:
    """Adam with best-loss tracking and patience-based early stopping.

    The stored best parameters are the ones the best loss was evaluated at.
    """
    state = AdamState.create(arrays)
    trace = TrainTrace()
    best = [a.copy() for a in arrays]
    no_improve = 0
    epoch = 0
    for epoch in range(1, config.max_iters + 1):
        loss, grads = objective(arrays)
        if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads):
            logger.error("non-finite loss at epoch %d", epoch)
            raise TrainingDivergedError(epoch, loss)
        trace.losses.append(loss)
        if loss < trace.best_loss:
            trace.best_loss = loss
            trace.best_epoch = epoch
            best = [a.copy() for a in arrays]
            no_improve = 0
        else:
            no_improve += 1

        stop = epoch > config.min_iters and no_improve >= config.patience
        last = stop or epoch == config.max_iters
        # metrics are taken at the parameters the loss was computed for
        if evaluate is not None and (epoch % config.eval_interval == 0 or last):
            trace.evals.append(evaluate(epoch, arrays, loss))
        if stop:
            trace.early_stopped = True
            logger.debug("early stop at epoch %d (best %.3e at %d)", epoch, trace.best_loss, trace.best_epoch)
            break
        if not last:
            arrays, state = adam_step(state, arrays, grads, config.learning_rate, config.betas, config.epsilon)

    trace.stopped_epoch = epoch
    return best, trace


def _make_evaluate(build: Callable[[List[np.ndarray]], PhaseEstimator], eval_grid: EvalGrid,
                   on_eval: Optional[EvalHook]):
    exact_grid = EvalGrid(size=eval_grid.size, shots=0)

    def evaluate(epoch: int, arrays: List[np.ndarray], loss: float) -> EvalRecord:
        model = build(arrays)
        record = EvalRecord(epoch=epoch, loss=loss, qfi=model.qfi(), swpe_median=swpe_median(model, exact_grid))
        if on_eval is not None:
            record.snapshot = on_eval(epoch, model)
        logger.debug("epoch %d loss %.3e qfi %.3f swpe %.2f dB", epoch, loss, record.qfi, record.swpe_median)
        return record

    return evaluate


def train_joint(config: TrainConfig, interferometer: Interferometer, circuit_init: CircuitParams,
                decoder_init: DecoderParams, eval_grid: Optional[EvalGrid] = None,
                on_eval: Optional[EvalHook] = None) -> TrainResult:
    """End-to-end optimization of {theta, vartheta, w, b} on the circular loss"""
    phases = phase_grid(config.n_phi)
    n_circuit = 2

    def objective(arrays):
        circuit = _circuit(arrays)
        decoder = decoder_init.with_arrays(arrays[n_circuit:])
        loss, quantum, classical = joint_loss_and_grad(interferometer, circuit, decoder, phases)
        return loss, quantum + classical

    def build(arrays):
        return NetworkEstimator(interferometer, _circuit(arrays), decoder_init.with_arrays(arrays[n_circuit:]))

    evaluate = _make_evaluate(build, eval_grid or EvalGrid(), on_eval)
    arrays = [circuit_init.encoding.copy(), circuit_init.decoding.copy(), *decoder_init.copy().arrays()]
    logger.debug("joint training: %d epochs max, lr %g", config.max_iters, config.learning_rate)
    best, trace = _optimize(objective, arrays, config, evaluate)
    logger.info("joint training finished at epoch %d, best loss %.3e", trace.stopped_epoch, trace.best_loss)
    return TrainResult(circuit=_circuit(best), decoder=decoder_init.with_arrays(best[n_circuit:]), trace=trace)


def train_decoder_fixed(config: TrainConfig, interferometer: Interferometer, circuit: CircuitParams,
                        decoder_init: DecoderParams, eval_grid: Optional[EvalGrid] = None,
                        on_eval: Optional[EvalHook] = None) -> TrainResult:
    """Same loop as train_joint with the quantum parameters frozen"""
    phases = phase_grid(config.n_phi)
    table = interferometer.probability_table(phases, circuit)

    def objective(arrays):
        loss, grads = _decoder_objective(decoder_init.with_arrays(arrays), table, phases)
        return loss, grads.arrays()

    def build(arrays):
        return NetworkEstimator(interferometer, circuit, decoder_init.with_arrays(arrays))

    evaluate = _make_evaluate(build, eval_grid or EvalGrid(), on_eval)
    best, trace = _optimize(objective, decoder_init.copy().arrays(), config, evaluate)
    logger.info("decoder-only training finished at epoch %d, best loss %.3e", trace.stopped_epoch, trace.best_loss)
    return TrainResult(circuit=circuit, decoder=decoder_init.with_arrays(best), trace=trace)


def train_vqi_baseline(config: TrainConfig, interferometer: Interferometer, circuit_init: CircuitParams,
                       prior: Optional[GaussianPrior] = None, eval_grid: Optional[EvalGrid] = None,
                       on_eval: Optional[EvalHook] = None) -> TrainResult:
    """BMSE minimization under a narrow Gaussian prior with an affine estimator in m.

    The estimator (a, b) starts from the weighted least-squares fit at the
    initial circuit and is co-optimized with the circuit angles.
    """
    prior = prior or GaussianPrior()
    phases, weights = prior.grid()
    labels = interferometer.labels

    def objective(arrays):
        circuit = _circuit(arrays)
        a, b = arrays[2]
        table, jacobian = interferometer.table_and_jacobian(phases, circuit)
        error = a * labels[None, :] + b - phases[:, None]
        mass = weights[:, None] * table
        loss = float(np.sum(mass * error ** 2))
        d_table = weights[:, None] * error ** 2
        quantum = np.einsum("nd,nkd->k", d_table, jacobian[:, :-1, :])
        d_coeffs = np.array([np.sum(2 * mass * error * labels[None, :]), np.sum(2 * mass * error)])
        return loss, _split_quantum_grad(quantum, circuit) + [d_coeffs]

    def build(arrays):
        a, b = arrays[2]
        return AffineEstimator(interferometer, _circuit(arrays), a, b)

    table0 = interferometer.probability_table(phases, circuit_init)
    coeffs = np.array(fit_affine_estimator(table0, phases, weights, labels))
    evaluate = _make_evaluate(build, eval_grid or EvalGrid(), on_eval)
    arrays = [circuit_init.encoding.copy(), circuit_init.decoding.copy(), coeffs]
    best, trace = _optimize(objective, arrays, config, evaluate)
    logger.info("BMSE baseline finished at epoch %d, best BMSE %.3e", trace.stopped_epoch, trace.best_loss)
    return TrainResult(circuit=_circuit(best), estimator=(float(best[2][0]), float(best[2][1])), trace=trace)
