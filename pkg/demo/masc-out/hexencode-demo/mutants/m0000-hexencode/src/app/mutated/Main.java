package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            StringBuilder plugHexencode0Hex = new StringBuilder();
            for (char plugHexencode0C : "DES".toCharArray()) {
                plugHexencode0Hex.append(String.format("%0" + 2 + "x", (int) plugHexencode0C));
            }
            String plugHexencode0Enc = plugHexencode0Hex.toString();
            StringBuilder plugHexencode0Out = new StringBuilder();
            for (int plugHexencode0I = 0; plugHexencode0I < plugHexencode0Enc.length(); plugHexencode0I += 2) {
                plugHexencode0Out.append((char) Integer.parseInt(plugHexencode0Enc.substring(plugHexencode0I, plugHexencode0I + 2), 16));
            }
            Cipher.getInstance(plugHexencode0Out.toString());
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
