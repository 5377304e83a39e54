import { describe, expect, it } from "vitest";

import { encodeCommand, fireLaser, parseMessage } from "../src/protocol.js";

describe("parseMessage", () => {
  it("accepts the documented sample shape", () => {
    const message = parseMessage(
      '{"kind":"sample","t":12.0,"volts":0.0042,"laser_on":false}',
    );
    expect(message).toEqual({ kind: "sample", t: 12, volts: 0.0042, laser_on: false });
  });

  it("accepts decision, pose, stimulus, status and ack", () => {
    expect(parseMessage('{"kind":"decision","t":3,"decision":"L"}')).not.toBeNull();
    expect(
      parseMessage('{"kind":"pose","t":3,"x_cm":1.2,"y_cm":0,"theta_deg":3}'),
    ).not.toBeNull();
    expect(
      parseMessage(
        '{"kind":"stimulus","t":10,"t_on_s":10,"duration_s":10,"amplitude":0.2,"mode":"inhibit"}',
      ),
    ).not.toBeNull();
    expect(parseMessage('{"kind":"status","t":0,"state":"started"}')).not.toBeNull();
    expect(
      parseMessage('{"kind":"ack","command":"fire_laser","ok":true,"applies_at_t":5}'),
    ).not.toBeNull();
  });

  it("rejects malformed payloads", () => {
    expect(parseMessage("not json")).toBeNull();
    expect(parseMessage('{"kind":"warp","t":1}')).toBeNull();
    expect(parseMessage('{"kind":"sample","t":"soon","volts":1}')).toBeNull();
    expect(parseMessage('{"kind":"decision","t":1,"decision":"X"}')).toBeNull();
    expect(parseMessage('{"kind":"sample","t":1,"volts":null}')).toBeNull();
  });
});

describe("commands", () => {
  it("fire_laser uses the wire field names", () => {
    const wire = JSON.parse(encodeCommand(fireLaser(10, 0.2, "inhibit")));
    expect(wire).toEqual({
      kind: "fire_laser",
      duration_s: 10,
      amplitude: 0.2,
      mode: "inhibit",
    });
  });
});
