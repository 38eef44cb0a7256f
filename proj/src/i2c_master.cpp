#include "wmsim/i2c_master.hpp"

#include <string>

namespace wmsim {

namespace {
constexpr uint32_t kMaxSclkHz = 526'000;
}

void validate(const I2cConfig& cfg) {
  if (cfg.sclk_hz == 0) throw ConfigError("i2c.sclk_hz: must be > 0");
  if (cfg.sclk_hz > kMaxSclkHz) {
    throw ConfigError("i2c.sclk_hz: " + std::to_string(cfg.sclk_hz) +
                      " exceeds the 526000 Hz codec limit");
  }
  if (kSystemFreqHz % cfg.sclk_hz != 0) {
    throw ConfigError("i2c.sclk_hz: must divide 80000000 evenly, got " +
                      std::to_string(cfg.sclk_hz));
  }
  if ((kSystemFreqHz / cfg.sclk_hz) % 2 != 0) {
    throw ConfigError("i2c.sclk_hz: tick period must be even, got " +
                      std::to_string(kSystemFreqHz / cfg.sclk_hz) + " ticks");
  }
  if (cfg.slave_addr > 0x7F) throw ConfigError("i2c.slave_addr: must be 7-bit");
}

std::pair<uint8_t, uint8_t> encode_command(const I2cCommand& cmd) {
  if (cmd.reg_addr > 0x7F) throw ConfigError("i2c command: reg_addr must be 7-bit");
  if (cmd.data > 0x1FF) throw ConfigError("i2c command: data must be 9-bit");
  const uint8_t b1 = uint8_t((cmd.reg_addr << 1) | ((cmd.data >> 8) & 1));
  const uint8_t b2 = uint8_t(cmd.data & 0xFF);
  return {b1, b2};
}

uint8_t address_byte(const I2cConfig& cfg) { return uint8_t(cfg.slave_addr << 1); }

I2cMaster::I2cMaster(I2cConfig cfg) : cfg_(cfg) {
  validate(cfg_);
  period_ = kSystemFreqHz / cfg_.sclk_hz;
  half_ = period_ / 2;
  quarter_ = period_ / 4;
}

bool I2cMaster::submit(const I2cCommand& cmd) {
  if (busy()) return false;
  auto [b1, b2] = encode_command(cmd);
  bytes_ = {address_byte(cfg_), b1, b2};
  last_acks_ = {false, false, false};
  state_ = I2cMasterState::Start;
  phase_ = 0;
  shift_register = bytes_[0];
  bit_index = 0;
  return true;
}

uint8_t I2cMaster::current_byte() const {
  switch (state_) {
    case I2cMasterState::AddrByte: return bytes_[0];
    case I2cMasterState::DataByte1: return bytes_[1];
    case I2cMasterState::DataByte2: return bytes_[2];
    default: return 0;
  }
}

void I2cMaster::advance() {
  phase_ = 0;
  switch (state_) {
    case I2cMasterState::Start: state_ = I2cMasterState::AddrByte; break;
    case I2cMasterState::AddrByte: state_ = I2cMasterState::AckAddr; break;
    case I2cMasterState::AckAddr: state_ = I2cMasterState::DataByte1; break;
    case I2cMasterState::DataByte1: state_ = I2cMasterState::AckData1; break;
    case I2cMasterState::AckData1: state_ = I2cMasterState::DataByte2; break;
    case I2cMasterState::DataByte2: state_ = I2cMasterState::AckData2; break;
    case I2cMasterState::AckData2: state_ = I2cMasterState::Stop; break;
    case I2cMasterState::Stop:
      state_ = I2cMasterState::Idle;
      ++transactions_;
      break;
    case I2cMasterState::Idle: break;
  }
  if (state_ == I2cMasterState::AddrByte || state_ == I2cMasterState::DataByte1 ||
      state_ == I2cMasterState::DataByte2) {
    shift_register = current_byte();
    bit_index = 0;
  }
}

void I2cMaster::tick(uint64_t, const PinState& in, PinState& out) {
  uint64_t duration = 0;
  switch (state_) {
    case I2cMasterState::Idle:
      out.sclk = 1;
      out.sdin_we_master = false;
      return;

    case I2cMasterState::Start:
      // SCLK stays at its idle-high level; SDIN falls at the midpoint of
      // this high half period, forming the start condition.
      duration = half_;
      out.sclk = 1;
      out.sdin_we_master = true;
      out.sdin_master = phase_ < quarter_ ? 1 : 0;
      break;

    case I2cMasterState::AddrByte:
    case I2cMasterState::DataByte1:
    case I2cMasterState::DataByte2: {
      duration = 8 * period_;
      const uint64_t cell = phase_ / period_;
      const uint64_t cp = phase_ % period_;
      const uint8_t byte = current_byte();
      out.sclk = cp < half_ ? 0 : 1;
      bit_index = uint8_t(cell);
      if (cell == 0 && cp < quarter_ && state_ != I2cMasterState::AddrByte) {
        // First quarter after an ack cell: leave the line released until
        // the slave has let go of its ack.
        out.sdin_we_master = false;
      } else {
        out.sdin_we_master = true;
        uint8_t v;
        if (cp < quarter_) {
          // Hold the previous bit until a quarter period into the low half.
          v = cell == 0 ? 0 : uint8_t((byte >> (8 - cell)) & 1);
        } else {
          v = uint8_t((byte >> (7 - cell)) & 1);
        }
        out.sdin_master = v;
      }
      break;
    }

    case I2cMasterState::AckAddr:
    case I2cMasterState::AckData1:
    case I2cMasterState::AckData2: {
      duration = period_;
      out.sclk = phase_ < half_ ? 0 : 1;
      out.sdin_we_master = false;
      if (phase_ == half_) {
        // Rising edge of the ack clock: sample the line (pull-up reads 1).
        const bool ack = in.sdin_level() == 0;
        const int slot = state_ == I2cMasterState::AckAddr    ? 0
                         : state_ == I2cMasterState::AckData1 ? 1
                                                              : 2;
        last_acks_[slot] = ack;
        if (!ack) {
          nack_latched_ = true;
          ++nacks_;
        }
      }
      break;
    }

    case I2cMasterState::Stop:
      // One more gated SCLK pulse: the falling edge lets the slave release
      // its ack, SDIN is then driven low, and the low-to-high transition
      // while SCLK is back high forms the stop condition.
      duration = period_;
      out.sclk = phase_ < half_ ? 0 : 1;
      if (phase_ < quarter_) {
        out.sdin_we_master = false;
      } else {
        out.sdin_we_master = true;
        out.sdin_master = phase_ < half_ + quarter_ ? 0 : 1;
      }
      break;
  }

  ++phase_;
  if (phase_ >= duration) advance();
}

}  // namespace wmsim
