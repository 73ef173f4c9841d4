"""Oblivious transfer over a simulated BB84 channel, audited with bit commitments."""

from .channel import QubitBatch, measure, prepare
from .protocol import (
    ABORT_CHECK,
    ABORT_PROTOCOL,
    ADVERSARIES,
    CutChooseResult,
    DelayingReceiver,
    EquivocatingReceiver,
    OutcomeFlipper,
    ProtocolError,
    Receiver,
    ReceiverState,
    Sender,
    SenderState,
    SessionConfig,
    bb84_simulate,
    choose_audit,
    commit_measurements,
    cut_and_choose,
    make_receiver,
    mask_of,
    measurement_mismatch,
    measurement_record,
    oblivious_key_phase,
    partition,
    receiver_output,
    sender_transfer,
)
from .session import (
    MonteCarloRate,
    SessionError,
    SessionReport,
    delaying_accept_rate,
    parse_addr,
    run_party,
    run_session,
)
from .toeplitz import ToeplitzHash, random_toeplitz, toeplitz_hash
