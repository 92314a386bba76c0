"""Built-in pyramidal baselines for 32x32 inputs.

Both presets follow the classical rule of doubling the filter count each time
the feature map is halved.
"""

from __future__ import annotations

from .model import (
    ArchitectureSpec,
    BottleneckUnit,
    ConvUnit,
    GlobalPoolUnit,
    PoolUnit,
    Unit,
)

VGG19_CIFAR_WIDTHS = (64, 64, 128, 128, 256, 256, 256, 256,
                      512, 512, 512, 512, 512, 512, 512, 512)
_VGG19_POOL_AFTER = (2, 4, 8, 12, 16)  # 1-based conv positions

# (base_width, block count) per stage; stages 2-4 enter with stride 2
RESNET50_STAGES = ((64, 3), (128, 4), (256, 6), (512, 3))

PRESET_NAMES = ("vgg19-cifar", "resnet50-cifar")


def _vgg19_cifar(num_classes: int) -> ArchitectureSpec:
    units: list[Unit] = []
    for pos, width in enumerate(VGG19_CIFAR_WIDTHS, start=1):
        units.append(ConvUnit(width=width, kernel=3, stride=1, has_bn=True))
        if pos in _VGG19_POOL_AFTER:
            units.append(PoolUnit(factor=2))
    return ArchitectureSpec(
        name="vgg19-cifar",
        input=(32, 32, 3),
        units=tuple(units),
        num_classes=num_classes,
    )


def _resnet50_cifar(num_classes: int) -> ArchitectureSpec:
    # CIFAR stem: 3x3 stride-1 conv, no initial pooling.
    units: list[Unit] = [ConvUnit(width=64, kernel=3, stride=1, has_bn=True)]
    in_channels = 64
    for stage, (base, blocks) in enumerate(RESNET50_STAGES):
        for block in range(blocks):
            stride = 2 if stage > 0 and block == 0 else 1
            unit = BottleneckUnit(base_width=base, stride=stride)
            proj = stride != 1 or in_channels != unit.expansion * base
            units.append(
                BottleneckUnit(base_width=base, stride=stride, has_projection=proj)
            )
            in_channels = unit.expansion * base
    units.append(GlobalPoolUnit())
    return ArchitectureSpec(
        name="resnet50-cifar",
        input=(32, 32, 3),
        units=tuple(units),
        num_classes=num_classes,
    )


def preset(name: str, num_classes: int = 10) -> ArchitectureSpec:
    """Return a built-in baseline spec by name.

    Known names: "vgg19-cifar", "resnet50-cifar".
    """
    if name == "vgg19-cifar":
        return _vgg19_cifar(num_classes)
    if name == "resnet50-cifar":
        return _resnet50_cifar(num_classes)
    raise KeyError(f"unknown preset '{name}' (known: {', '.join(PRESET_NAMES)})")
