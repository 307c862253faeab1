"""Mini-batch training loop"""

import math
from dataclasses import dataclass, field

import numpy as np

from falsestructures.exceptions import DivergedError, ParameterError
from falsestructures.nn.losses import bce_grad, bce_loss
from falsestructures.nn.network import Network
from falsestructures.nn.optimizer import AdamHyperParameters, AdamState, adam_step
from falsestructures.nn.tensor import Tensor, as_tensor
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Dataset:
    """Inputs (N, *input_shape) with binary labels (N,)"""

    inputs: Tensor
    labels: Tensor

    def __post_init__(self) -> None:
        if len(self.inputs) != len(self.labels):
            raise ParameterError(f"{len(self.inputs)} inputs for {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.labels)


@dataclass
class TrainingResult:
    """Outcome of train()

    loss_history holds one batch-mean loss per optimizer step; final_loss_sum is the summed
    cross entropy over the whole training set after the last step.
    """

    network: Network
    loss_history: np.ndarray
    batches_per_epoch: int
    final_loss_sum: float
    adam: AdamState = field(repr=False)

    def epoch_means(self) -> np.ndarray:
        """Mean of the batch losses of every epoch"""
        if self.loss_history.size == 0:
            return self.loss_history
        return self.loss_history.reshape(-1, self.batches_per_epoch).mean(axis=1)


def train(
    net: Network,
    dataset: Dataset,
    epochs: int,
    batch_size: int,
    rng: np.random.Generator,
    hyper: AdamHyperParameters | None = None,
    log_every: int = 1000,
) -> TrainingResult:
    """Train net in place with Adam on batch-mean cross entropy, reshuffling every epoch

    Args:
        net (Network): network to train, mutated
        dataset (Dataset): training data
        epochs (int): number of passes over the data
        batch_size (int): samples per step, the last batch of an epoch may be smaller
        rng (np.random.Generator): shuffling stream only
        hyper (AdamHyperParameters | None): Adam constants
        log_every (int): epochs between progress lines
    """
    n = len(dataset)
    if n == 0:
        raise ParameterError("cannot train on an empty dataset")
    if not 1 <= batch_size <= n:
        raise ParameterError(f"batch size {batch_size} must be in [1, {n}]")
    if epochs < 0:
        raise ParameterError(f"epochs must be >= 0, got {epochs}")

    inputs = as_tensor(dataset.inputs)
    labels = as_tensor(dataset.labels)
    params = net.parameters()
    state = AdamState.for_parameters(params, hyper)
    batches_per_epoch = math.ceil(n / batch_size)
    history = np.empty(epochs * batches_per_epoch)

    step = 0
    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            index = order[start : start + batch_size]
            logits = net.forward(inputs[index], record=True)
            loss = bce_loss(logits, labels[index], reduction="mean")
            if not math.isfinite(loss):
                raise DivergedError(epoch, loss)
            net.backward(bce_grad(logits, labels[index], reduction="mean"))
            adam_step(state, params, net.gradients())
            history[step] = loss
            step += 1
        if log_every and (epoch + 1) % log_every == 0:
            epoch_loss = history[step - batches_per_epoch : step].mean()
            logger.info("epoch %d/%d: mean batch loss %.6g", epoch + 1, epochs, epoch_loss)

    final_loss = bce_loss(net.predict_logits(inputs), labels)
    logger.debug("Training finished after %d steps, summed loss %.6g", step, final_loss)
    return TrainingResult(
        network=net, loss_history=history, batches_per_epoch=batches_per_epoch, final_loss_sum=final_loss, adam=state
    )
