// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/app/reference_targets.hpp"

#include <array>
#include <string>

#include "herbclf/error.hpp"

namespace herbclf::app
{

namespace
{

using zoo::Architecture;

constexpr std::array<TargetRow, 6> kVietnam{{
    {Architecture::resnet34, "ResNet34", 0.0043, 0.9995, 0.8013, 0.8498},
    {Architecture::densenet121, "DenseNet121", 0.0010, 0.9998, 0.5621, 0.8892},
    {Architecture::vgg11_bn, "VGG11_bn", 0.0245, 0.9921, 1.0136, 0.8444},
    {Architecture::convnext_base, "ConvNeXt_base", 0.0008, 0.9998, 0.4098, 0.9278},
    {Architecture::swin_t, "Swin_t", 0.4905, 0.8639, 1.6539, 0.6504},
    {Architecture::scratch, "Scratch", 0.7023, 0.8012, 2.7618, 0.4849},
}};

constexpr std::array<TargetRow, 6> kIndonesia{{
    {Architecture::resnet34, "ResNet34", 0.0143, 0.9965, 0.6857, 0.8650},
    {Architecture::densenet121, "DenseNet121", 0.0027, 0.9998, 0.4873, 0.8910},
    {Architecture::vgg11_bn, "VGG11_bn", 0.0301, 0.9898, 0.8412, 0.8703},
    {Architecture::convnext_base, "ConvNeXt_Base", 0.0026, 0.9995, 0.3622, 0.9250},
    {Architecture::swin_t, "Swin_t", 0.1705, 0.9562, 1.1918, 0.7655},
    {Architecture::scratch, "Scratch", 0.7147, 0.8162, 2.3606, 0.5390},
}};

}  // namespace

std::span<const TargetRow> TargetTable(int table)
{
  switch (table)
  {
    case 1: return kVietnam;
    case 3: return kIndonesia;
    default: throw UsageError("--paper-table must be 1 or 3, got " + std::to_string(table));
  }
}

int TargetClassCount(int table)
{
  TargetTable(table);
  return table == 1 ? 200 : 100;
}

}  // namespace herbclf::app
