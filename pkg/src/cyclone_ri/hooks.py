import logging
from typing import Any, Callable, List, Optional

logger = logging.getLogger(__name__)

PreTrainHook = Callable[[Any, Any], None]  # Takes network and train config
PostEpochHook = Callable[[int, float, float], None]  # Takes epoch (1-based), epoch SSE, train accuracy
PostTrainHook = Callable[[Any, Any], None]  # Takes trained network and history


class TrainingHooks:
    """Registry for callbacks invoked by the training loop."""

    def __init__(self):
        self.pre_train_hooks: List[PreTrainHook] = []
        self.post_epoch_hooks: List[PostEpochHook] = []
        self.post_train_hooks: List[PostTrainHook] = []

    def add_pre_train_hook(self, hook: PreTrainHook):
        """Add a hook that runs once before the first epoch."""
        self.pre_train_hooks.append(hook)

    def add_post_epoch_hook(self, hook: PostEpochHook):
        """Add a hook that runs after every epoch."""
        self.post_epoch_hooks.append(hook)

    def add_post_train_hook(self, hook: PostTrainHook):
        """Add a hook that runs after training stops."""
        self.post_train_hooks.append(hook)

    def run_pre_train(self, net: Any, config: Any) -> None:
        for hook in self.pre_train_hooks:
            hook(net, config)

    def run_post_epoch(self, epoch: int, sse: float, accuracy: float) -> None:
        for hook in self.post_epoch_hooks:
            hook(epoch, sse, accuracy)

    def run_post_train(self, net: Any, history: Any) -> None:
        for hook in self.post_train_hooks:
            hook(net, history)

    def clear_hooks(self, hook_type: Optional[str] = None):
        """Clear hooks of a specific type or all hooks if hook_type is None."""
        if hook_type is None:
            self.pre_train_hooks.clear()
            self.post_epoch_hooks.clear()
            self.post_train_hooks.clear()
        elif hook_type == "pre_train":
            self.pre_train_hooks.clear()
        elif hook_type == "post_epoch":
            self.post_epoch_hooks.clear()
        elif hook_type == "post_train":
            self.post_train_hooks.clear()
        else:
            raise ValueError(f"Unknown hook type: {hook_type}")


def progress_logger(every: int, label: str = "train") -> PostEpochHook:
    """Post-epoch hook that logs SSE and accuracy every `every` epochs."""

    def log_epoch(epoch: int, sse: float, accuracy: float) -> None:
        if every > 0 and (epoch == 1 or epoch % every == 0):
            logger.info("%s epoch %d: sse=%.6f train_accuracy=%.3f%%", label, epoch, sse, accuracy)

    return log_epoch
