StringBuilder %{FRESH_ID}%Hex = new StringBuilder();
for (char %{FRESH_ID}%C : "%{INSECURE_PARAM}%".toCharArray()) {
    %{FRESH_ID}%Hex.append(String.format("%0" + %{CFG:hexWidth}% + "x", (int) %{FRESH_ID}%C));
}
String %{FRESH_ID}%Enc = %{FRESH_ID}%Hex.toString();
StringBuilder %{FRESH_ID}%Out = new StringBuilder();
for (int %{FRESH_ID}%I = 0; %{FRESH_ID}%I < %{FRESH_ID}%Enc.length(); %{FRESH_ID}%I += %{CFG:hexWidth}%) {
    %{FRESH_ID}%Out.append((char) Integer.parseInt(%{FRESH_ID}%Enc.substring(%{FRESH_ID}%I, %{FRESH_ID}%I + %{CFG:hexWidth}%), 16));
}
%{API_SIMPLE_NAME}%.%{FACTORY_METHOD}%(%{FRESH_ID}%Out.toString());
