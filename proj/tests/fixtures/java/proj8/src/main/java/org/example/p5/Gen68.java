package org.example.p5;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen68 {
    /**
     * Does { something } with key.
     */
    public final double store0() throws IOException, InterruptedException {}
}
