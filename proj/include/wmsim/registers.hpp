#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "wmsim/errors.hpp"

namespace wmsim {

// Word-addressed interface registers, offsets from one base.
//
//   offset  name        access  bits
//   0x00    DAC_L       W       output sample, left (two's complement)
//   0x04    DAC_R       W       output sample, right
//   0x08    DAC_EN      RW      bit0 enables the DAC serializer
//   0x0C    ADC_L       R       captured sample, left (sign extended)
//   0x10    ADC_R       R       captured sample, right
//   0x14    ADC_EN      RW      bit0 enables the ADC deserializer
//   0x18    STATUS      R       bit0 dacBusy, bit1 adcBusy,
//                               bit2 dacLrcSeen, bit3 adcLrcSeen;
//                               the seen bits are sticky and a read clears
//                               both of them
//   0x1C    I2C_DATA    W       bits [15:9] reg_addr, [8:0] data; the write
//                               submits a transaction; ignored while busy
//   0x20    I2C_STATUS  RW      read: bit0 busy, bit1 sticky nack;
//                               any write clears the nack bit
//
// DAC_L/DAC_R reads return the last written value.
namespace reg {
inline constexpr uint32_t DAC_L = 0x00;
inline constexpr uint32_t DAC_R = 0x04;
inline constexpr uint32_t DAC_EN = 0x08;
inline constexpr uint32_t ADC_L = 0x0C;
inline constexpr uint32_t ADC_R = 0x10;
inline constexpr uint32_t ADC_EN = 0x14;
inline constexpr uint32_t STATUS = 0x18;
inline constexpr uint32_t I2C_DATA = 0x1C;
inline constexpr uint32_t I2C_STATUS = 0x20;
inline constexpr uint32_t END = 0x24;
}  // namespace reg

// Routes word accesses to the owning devices. Accesses happen between
// simulator ticks only; read side effects (sticky bit clears) are part of
// the register contract.
class RegisterFile {
 public:
  using ReadFn = std::function<uint32_t()>;
  using WriteFn = std::function<void(uint32_t)>;

  void map(uint32_t offset, ReadFn r, WriteFn w);

  uint32_t read(uint32_t offset) const;
  void write(uint32_t offset, uint32_t value);

 private:
  struct Slot {
    ReadFn read;
    WriteFn write;
  };
  std::array<Slot, reg::END / 4> slots_{};

  static size_t index_for(uint32_t offset);
};

}  // namespace wmsim
