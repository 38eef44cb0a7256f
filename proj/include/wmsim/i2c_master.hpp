#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "wmsim/sim.hpp"

namespace wmsim {

// sclk_hz must divide 80 MHz into an even number of ticks and stay at or
// below the codec's 526 kHz limit. 200 kHz gives a 400-tick period.
struct I2cConfig {
  uint32_t sclk_hz = 200'000;
  uint8_t slave_addr = 0x1A;  // 7-bit chip address, write-only traffic
};

void validate(const I2cConfig& cfg);

// 7-bit register address and 9-bit register value, packed on the wire as
// two bytes: {reg_addr, data[8]} then data[7:0].
struct I2cCommand {
  uint8_t reg_addr = 0;
  uint16_t data = 0;
  bool operator==(const I2cCommand&) const = default;
};

std::pair<uint8_t, uint8_t> encode_command(const I2cCommand& cmd);
uint8_t address_byte(const I2cConfig& cfg);  // (slave_addr << 1) | write bit 0

enum class I2cMasterState {
  Idle,
  Start,
  AddrByte,
  AckAddr,
  DataByte1,
  AckData1,
  DataByte2,
  AckData2,
  Stop,
};

// Write-only bus master. SCLK idles high and is gated: it only toggles
// while a transaction is in flight. Each of the 27 bit cells is one SCLK
// period, low half then high half; SDIN moves a quarter period into the
// low half, so it is stable whenever SCLK is high. The start condition
// drops SDIN at the midpoint of an SCLK-high half period; the stop state
// adds one more gated SCLK pulse so the slave's ack release (which needs
// a falling edge) can happen before SDIN is driven low and released high.
//
// On a nack the transaction still runs to Stop; the nack is latched in a
// sticky status bit and there is no retry. Command queue depth is 1.
class I2cMaster final : public Device {
 public:
  explicit I2cMaster(I2cConfig cfg);

  // Rejected (returns false, no state change) while busy.
  bool submit(const I2cCommand& cmd);

  bool busy() const { return state_ != I2cMasterState::Idle; }
  bool nack_latched() const { return nack_latched_; }
  void clear_nack() { nack_latched_ = false; }
  uint32_t status_word() const {
    return (busy() ? 1u : 0u) | (nack_latched_ ? 2u : 0u);
  }

  I2cMasterState state() const { return state_; }
  // Acks sampled during the current/most recent transaction: addr, data1, data2.
  const std::array<bool, 3>& last_acks() const { return last_acks_; }
  uint64_t transaction_count() const { return transactions_; }
  uint64_t nack_count() const { return nacks_; }
  uint64_t period_ticks() const { return period_; }
  // Total ticks a transaction occupies from Start through Stop.
  uint64_t transaction_ticks() const { return period_ / 2 + 28 * period_; }

  void tick(uint64_t t, const PinState& in, PinState& out) override;

 private:
  uint8_t current_byte() const;
  void advance();

  I2cConfig cfg_;
  uint64_t period_;   // SCLK period in ticks
  uint64_t half_;     // period_ / 2
  uint64_t quarter_;  // period_ / 4

  I2cMasterState state_ = I2cMasterState::Idle;
  uint64_t phase_ = 0;  // ticks into the current state
  std::array<uint8_t, 3> bytes_{};
  uint8_t shift_register = 0;
  uint8_t bit_index = 0;
  std::array<bool, 3> last_acks_{};
  bool nack_latched_ = false;
  uint64_t transactions_ = 0;
  uint64_t nacks_ = 0;
};

}  // namespace wmsim
